use dipsqueeze::runner::{run_scenario, run_scenario_with, RunOptions, ScenarioConfig};

const BASE: &str = "reservoir.eta = 5\nreservoir.epsilon_dd = -1\nreservoir.theta = 0.015\n\
                    time.t_min = 1\ntime.t_max = 30\ntime.n_points = 6\n";

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn kernel_sweep_gives_one_file_per_value() {
    let cfg = ScenarioConfig::parse(&format!(
        "{BASE}sweep.parameter = epsilon_dd\nsweep.values = 1, -1, 0\noutputs = kernels\n"
    ))
    .unwrap();
    let ds = run_scenario(&cfg).unwrap();
    let names: Vec<&str> = ds.names().collect();
    assert_eq!(names, ["kernels_epsilon_dd_-1.csv", "kernels_epsilon_dd_0.csv", "kernels_epsilon_dd_1.csv"]);
    assert!(ds.get("kernels_epsilon_dd_1.csv").unwrap().contains("# delta_inf = "));
}

#[test]
fn empty_sweep_matches_sweep_of_one() {
    let single = ScenarioConfig::parse(&format!("{BASE}n_atoms = 8\noutputs = xi2, qfi\n")).unwrap();
    let one = ScenarioConfig::parse(&format!(
        "{BASE}sweep.parameter = n_atoms\nsweep.values = 8\noutputs = xi2, qfi\n"
    ))
    .unwrap();
    let a = run_scenario(&single).unwrap();
    let b = run_scenario(&one).unwrap();
    assert_eq!(
        data_rows(a.get("metrology_run.csv").unwrap()),
        data_rows(b.get("metrology_n_atoms_8.csv").unwrap())
    );
    let row = |csv: &str| data_rows(csv)[1].split_once(',').unwrap().1.to_string();
    assert_eq!(row(a.get("summary.csv").unwrap()), row(b.get("summary.csv").unwrap()));
}

#[test]
fn caching_and_threads_do_not_change_output() {
    let text = format!(
        "{BASE}sweep.parameter = gamma_loss_rel\nsweep.values = 0, 0.01\n\
         sweep.inner.parameter = n_atoms\nsweep.inner.values = 4, 6\noutputs = xi2, qfi, fidelity\n"
    );
    let cached = ScenarioConfig::parse(&text).unwrap();
    let uncached = ScenarioConfig::parse(&format!("{text}cache.kernels = false\n")).unwrap();
    let a = run_scenario_with(&cached, RunOptions { threads: Some(1) }).unwrap();
    let b = run_scenario_with(&cached, RunOptions { threads: Some(3) }).unwrap();
    let c = run_scenario(&uncached).unwrap();
    assert_eq!(a, b);
    // only the config hash line differs
    for (name, body) in &a.files {
        assert_eq!(data_rows(body), data_rows(c.get(name).unwrap()), "{name}");
    }
}

#[test]
fn heisenberg_limit_in_summary() {
    let cfg = ScenarioConfig::parse(
        "reservoir.epsilon_dd = -1\nsweep.parameter = n_atoms\nsweep.values = 2, 6\n\
         time.t_min = 50\ntime.t_max = 150\ntime.n_points = 11\ntime.spacing = linear\n\
         outputs = qfi, fidelity\ndephasing.force_zero = true\n",
    )
    .unwrap();
    let ds = run_scenario(&cfg).unwrap();
    let s = ds.get("summary.csv").unwrap();
    let rows = data_rows(s);
    let header: Vec<&str> = rows[0].split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        let n: f64 = f[col("n_atoms")].parse().unwrap();
        let fq: f64 = f[col("fq_t_opt")].parse().unwrap();
        let fid: f64 = f[col("fidelity_t_opt")].parse().unwrap();
        assert!((fq / (n * n) - 1.0).abs() < 1e-9, "{row}");
        assert!((fid - 1.0).abs() < 1e-9, "{row}");
        let grid: f64 = f[col("fq_grid_max")].parse().unwrap();
        let refined: f64 = f[col("fq_refined_max")].parse().unwrap();
        assert!(grid <= refined && refined <= n * n * (1.0 + 1e-9));
    }
}

#[test]
fn two_atom_overlay_and_loss_files() {
    let cfg = ScenarioConfig::parse(&format!(
        "{BASE}n_atoms = 2\ngamma_loss_rel = 0.005\noutputs = xi2, qfi\noverlay.n2_analytic = true\n"
    ))
    .unwrap();
    let ds = run_scenario(&cfg).unwrap();
    let overlay = ds.get("n2_analytic_run.csv").unwrap();
    assert_eq!(data_rows(overlay)[0], "t,fq_numeric,fq_analytic,c_xx,c_yy,c_zz,c_yz,c_perp");
    assert!(ds.get("xi2_conventions_run.csv").is_some());
}

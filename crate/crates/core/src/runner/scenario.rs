//! Scenario execution: kernels per reservoir, evolution per (point, t),
//! CSV assembly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{ScenarioConfig, SweepParameter};
use super::summary::{qfi_amplification_summary, refine_optimal_time};
use crate::error::{Error, Result};
use crate::metrology::{
    qfi_n2_analytic, squeezing_from_moments, LossyMoments, MetrologyReport, Observables,
};
use crate::output::fmt12;
use crate::reservoir::{Dispersion, KernelSolver, KernelTable, ReservoirParams};
use crate::spin::{evolve, DickeState, EvolutionInputs};
use crate::VERSION;

/// Execution options that do not affect the output.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

/// Output files by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    pub files: BTreeMap<String, String>,
}

impl Dataset {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.get(name).map(String::as_str)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    /// Write every file into `dir` (created if missing).
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::with_capacity(self.files.len());
        for (name, body) in &self.files {
            let p = dir.join(name);
            std::fs::write(&p, body)?;
            paths.push(p);
        }
        Ok(paths)
    }
}

/// One combination of sweep values.
#[derive(Debug, Clone)]
struct Point {
    labels: Vec<(SweepParameter, f64)>,
    params: ReservoirParams,
    n_atoms: usize,
    gamma_loss_rel: f64,
}

impl Point {
    fn tag(&self) -> String {
        if self.labels.is_empty() {
            return "run".into();
        }
        self.labels
            .iter()
            .map(|(p, v)| format!("{}_{}", p.name(), p.format_value(*v)))
            .collect::<Vec<_>>()
            .join("_")
    }

    fn reservoir_key(&self) -> [u64; 5] {
        let p = &self.params;
        [p.eta, p.epsilon_dd, p.theta, p.ell_ratio, p.temperature].map(f64::to_bits)
    }
}

fn expand_points(cfg: &ScenarioConfig) -> Result<Vec<Point>> {
    let base = Point {
        labels: Vec::new(),
        params: cfg.reservoir.dimensionless()?,
        n_atoms: cfg.n_atoms,
        gamma_loss_rel: cfg.gamma_loss_rel,
    };
    let mut points = vec![base];
    for sweep in cfg.sweep.iter().chain(cfg.inner_sweep.iter()) {
        let mut next = Vec::with_capacity(points.len() * sweep.values.len());
        for p in &points {
            for &v in &sweep.values {
                let mut q = p.clone();
                match sweep.parameter {
                    SweepParameter::EpsilonDd => q.params.epsilon_dd = v,
                    SweepParameter::Theta => q.params.theta = v,
                    SweepParameter::Eta => q.params.eta = v,
                    SweepParameter::NAtoms => q.n_atoms = v as usize,
                    SweepParameter::GammaLossRel => q.gamma_loss_rel = v,
                }
                q.labels.push((sweep.parameter, v));
                next.push(q);
            }
        }
        points = next;
    }
    for p in &points {
        p.params.validate()?;
    }
    points.sort_by(|a, b| {
        a.labels
            .iter()
            .zip(&b.labels)
            .map(|((_, x), (_, y))| x.total_cmp(y))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    });
    Ok(points)
}

/// Everything derived from one reservoir.
struct ReservoirData {
    solver: KernelSolver,
    table: KernelTable,
    /// `(t_opt, Δ(t_opt), γ(t_opt))` from exact kernels.
    optimum: Option<(f64, f64, f64)>,
}

impl ReservoirData {
    fn build(params: &ReservoirParams, cfg: &ScenarioConfig, times: &[f64], want_optimum: bool) -> Result<Self> {
        let solver = KernelSolver::new(params, &cfg.quadrature)?;
        let table = solver.table(times)?;
        let mut optimum = None;
        let usable = table.delta_inf.is_none_or(|d| d > 0.0);
        if want_optimum && usable {
            let f = |i: usize| table.times[i] * table.delta[i] - FRAC_PI_2;
            if let Some(i) = (1..table.len()).find(|&i| f(i) >= 0.0 && f(i - 1) < 0.0) {
                let t = refine_optimal_time(&solver, table.times[i - 1], table.times[i])?;
                optimum = Some((t, solver.delta(t)?, solver.gamma(t)?));
            }
        }
        Ok(Self { solver, table, optimum })
    }
}

fn provenance(cfg_hash: &str, point: &Point, what: &str) -> Vec<String> {
    let p = &point.params;
    vec![
        format!("dipsqueeze {VERSION}"),
        format!("config sha256 {cfg_hash}"),
        format!("{what}, scenario {}", point.tag()),
        format!(
            "eta = {}, epsilon_dd = {}, theta = {}, ell_ratio = {}, temperature = {}",
            p.eta, p.epsilon_dd, p.theta, p.ell_ratio, p.temperature
        ),
    ]
}

fn header(lines: &[String]) -> String {
    let mut s = String::new();
    for l in lines {
        let _ = writeln!(s, "# {l}");
    }
    s
}

/// Per-time output of one point.
struct Row {
    report: MetrologyReport,
    xi2_unnormalized: Option<f64>,
}

fn evaluate_row(
    css: &DickeState,
    t: f64,
    delta: f64,
    gamma: f64,
    gamma_loss: f64,
    cfg: &ScenarioConfig,
    conventions: bool,
) -> Result<Row> {
    let inputs = EvolutionInputs::new(cfg.lambda_prime, delta, gamma, gamma_loss, t)?;
    let state = evolve(css, &inputs)?;
    let what = Observables { xi2: cfg.outputs.xi2, qfi: cfg.outputs.qfi, fidelity: cfg.outputs.fidelity };
    let report = MetrologyReport::evaluate(t, &state, what)?;
    let xi2_unnormalized = if conventions {
        let m = LossyMoments::from_state(&state, false)?;
        match squeezing_from_moments(&m, state.n_atoms()) {
            Ok(s) => Some(s.xi_squared),
            Err(Error::UndefinedDirection(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(Row { report, xi2_unnormalized })
}

/// Run a scenario in the global thread pool.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Dataset> {
    run_scenario_with(cfg, RunOptions::default())
}

pub fn run_scenario_with(cfg: &ScenarioConfig, opts: RunOptions) -> Result<Dataset> {
    cfg.validate()?;
    match opts.threads {
        None => run_inner(cfg),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
            pool.install(|| run_inner(cfg))
        }
    }
}

pub const SUMMARY_HEADER: &str = "tag,eta,epsilon_dd,theta,n_atoms,gamma_loss_rel,gamma_loss,delta_inf,\
t_opt,fidelity_t_opt,fq_t_opt,t_fq_grid_max,fq_grid_max,fq_refined_max,fq_max_over_n,fq_max_over_n2";

fn run_inner(cfg: &ScenarioConfig) -> Result<Dataset> {
    let hash = cfg.hash();
    let times = cfg.time_grid.points();
    let points = expand_points(cfg)?;
    let want_summary = cfg.outputs.qfi || cfg.outputs.fidelity;
    if cfg.n2_analytic && !cfg.outputs.qfi {
        return Err(Error::Config("overlay.n2_analytic requires the qfi output".into()));
    }

    // One reservoir slot per point; shared slots when caching.
    let mut slot_of = Vec::with_capacity(points.len());
    let mut reservoirs: Vec<ReservoirParams> = Vec::new();
    let mut seen: BTreeMap<[u64; 5], usize> = BTreeMap::new();
    for p in &points {
        let slot = if cfg.cache_kernels {
            *seen.entry(p.reservoir_key()).or_insert_with(|| {
                reservoirs.push(p.params);
                reservoirs.len() - 1
            })
        } else {
            reservoirs.push(p.params);
            reservoirs.len() - 1
        };
        slot_of.push(slot);
    }
    let data: Vec<ReservoirData> = reservoirs
        .par_iter()
        .map(|r| ReservoirData::build(r, cfg, &times, want_summary))
        .collect::<Result<_>>()?;

    let mut gamma_loss = Vec::with_capacity(points.len());
    for (p, &s) in points.iter().zip(&slot_of) {
        let g = match (cfg.gamma_loss_abs, p.gamma_loss_rel) {
            (Some(abs), _) => abs,
            (None, 0.0) => 0.0,
            (None, rel) => match data[s].table.delta_inf {
                Some(d) => rel * d,
                None => {
                    return Err(Error::Config(format!(
                        "gamma_loss_rel = {rel} needs a finite Δ(∞), which diverges for scenario {}",
                        p.tag()
                    )))
                }
            },
        };
        gamma_loss.push(g);
    }

    let mut files = BTreeMap::new();

    if cfg.outputs.kernels {
        for (p, &s) in points.iter().zip(&slot_of) {
            let body = data[s].table.to_csv(&provenance(&hash, p, "kernels Δ(t), γ(t)"));
            files.insert(format!("kernels_{}.csv", p.tag()), body);
        }
    }

    if cfg.outputs.spectral_density {
        let omegas = cfg.spectral.points();
        for (p, &s) in points.iter().zip(&slot_of) {
            let disp = Dispersion::new(&p.params, data[s].solver.k_max())?;
            let rows: Vec<String> = omegas
                .par_iter()
                .map(|&w| match disp.spectral_density(w) {
                    Ok(b) => Ok(format!("{},{},{}", fmt12(w), fmt12(b.value), b.branch_count())),
                    // J(ω) is singular where a root sits on an extremum
                    Err(Error::ExtremumSingularity { .. }) => Ok(format!("{},{},0", fmt12(w), fmt12(f64::NAN))),
                    Err(e) => Err(e),
                })
                .collect::<Result<_>>()?;
            let mut body = header(&provenance(&hash, p, "spectral density J(ω)"));
            body.push_str("omega,j,branches\n");
            for r in rows {
                body.push_str(&r);
                body.push('\n');
            }
            files.insert(format!("spectral_{}.csv", p.tag()), body);
        }
    }

    if cfg.outputs.metrology() {
        let css: Vec<DickeState> = points
            .iter()
            .map(|p| DickeState::css_plus_x(p.n_atoms))
            .collect::<Result<_>>()?;
        let tasks: Vec<(usize, usize)> =
            (0..points.len()).flat_map(|i| (0..times.len()).map(move |j| (i, j))).collect();
        let rows: Vec<Row> = tasks
            .par_iter()
            .map(|&(i, j)| {
                let table = &data[slot_of[i]].table;
                let gamma = if cfg.force_zero_dephasing { 0.0 } else { table.gamma[j] };
                let conventions = cfg.outputs.xi2 && gamma_loss[i] > 0.0;
                evaluate_row(&css[i], times[j], table.delta[j], gamma, gamma_loss[i], cfg, conventions)
            })
            .collect::<Result<_>>()?;
        let rows_of = |i: usize| &rows[i * times.len()..(i + 1) * times.len()];

        for (i, p) in points.iter().enumerate() {
            if !cfg.timeseries {
                break;
            }
            let mut prov = provenance(&hash, p, "metrology");
            prov.push(format!(
                "n_atoms = {}, gamma_loss = {}, lambda_prime = {}, dephasing forced to zero = {}",
                p.n_atoms, gamma_loss[i], cfg.lambda_prime, cfg.force_zero_dephasing
            ));
            let mut body = header(&prov);
            body.push_str(MetrologyReport::CSV_HEADER);
            body.push('\n');
            for r in rows_of(i) {
                body.push_str(&r.report.csv_row());
                body.push('\n');
            }
            files.insert(format!("metrology_{}.csv", p.tag()), body);

            if cfg.outputs.xi2 && gamma_loss[i] > 0.0 {
                let mut body = header(&prov);
                body.push_str("t,xi2_normalized,xi2_unnormalized\n");
                for r in rows_of(i) {
                    let v = |x: Option<f64>| fmt12(x.unwrap_or(f64::NAN));
                    let _ = writeln!(
                        body,
                        "{},{},{}",
                        fmt12(r.report.t),
                        v(r.report.xi_squared),
                        v(r.xi2_unnormalized)
                    );
                }
                files.insert(format!("xi2_conventions_{}.csv", p.tag()), body);
            }

            if cfg.n2_analytic && p.n_atoms == 2 {
                let table = &data[slot_of[i]].table;
                let mut body = header(&prov);
                body.push_str("t,fq_numeric,fq_analytic,c_xx,c_yy,c_zz,c_yz,c_perp\n");
                for (j, r) in rows_of(i).iter().enumerate() {
                    let gamma = if cfg.force_zero_dephasing { 0.0 } else { table.gamma[j] };
                    let a = qfi_n2_analytic(times[j], table.delta[j], gamma);
                    let fq = r.report.qfi.as_ref().map_or(f64::NAN, |q| q.value);
                    let _ = writeln!(
                        body,
                        "{},{},{},{},{},{},{},{}",
                        fmt12(times[j]),
                        fmt12(fq),
                        fmt12(a.f_q_max),
                        fmt12(a.c_xx),
                        fmt12(a.c_yy),
                        fmt12(a.c_zz),
                        fmt12(a.c_yz),
                        fmt12(a.c_perp)
                    );
                }
                files.insert(format!("n2_analytic_{}.csv", p.tag()), body);
            }
        }

        if want_summary {
            let at_opt: Vec<Option<Row>> = points
                .par_iter()
                .enumerate()
                .map(|(i, _)| {
                    let Some((t, d, g)) = data[slot_of[i]].optimum else { return Ok(None) };
                    let g = if cfg.force_zero_dephasing { 0.0 } else { g };
                    evaluate_row(&css[i], t, d, g, gamma_loss[i], cfg, false).map(Some)
                })
                .collect::<Result<_>>()?;
            let mut body = header(&[
                format!("dipsqueeze {VERSION}"),
                format!("config sha256 {hash}"),
                "summary: optimal time tΔ(t) = π/2 and QFI peak per scenario".into(),
            ]);
            body.push_str(SUMMARY_HEADER);
            body.push('\n');
            let nan = f64::NAN;
            for (i, p) in points.iter().enumerate() {
                let rd = &data[slot_of[i]];
                let (t_opt, fid, fq_opt) = match (&rd.optimum, &at_opt[i]) {
                    (Some((t, _, _)), Some(r)) => (
                        *t,
                        r.report.cat_fidelity.unwrap_or(nan),
                        r.report.qfi.as_ref().map_or(nan, |q| q.value),
                    ),
                    _ => (nan, nan, nan),
                };
                let peak = if cfg.outputs.qfi {
                    let fq: Vec<f64> = rows_of(i).iter().map(|r| r.report.qfi.as_ref().map_or(nan, |q| q.value)).collect();
                    Some(qfi_amplification_summary(&times, &fq, p.n_atoms)?)
                } else {
                    None
                };
                let pk = |f: fn(&super::summary::QfiPeak) -> f64| peak.as_ref().map_or(nan, f);
                let fields = [
                    p.params.eta,
                    p.params.epsilon_dd,
                    p.params.theta,
                    p.n_atoms as f64,
                    p.gamma_loss_rel,
                    gamma_loss[i],
                    rd.table.delta_inf.unwrap_or(f64::INFINITY),
                    t_opt,
                    fid,
                    fq_opt,
                    pk(|q| q.t_grid_max),
                    pk(|q| q.grid_max),
                    pk(|q| q.refined_max),
                    pk(|q| q.over_n),
                    pk(|q| q.over_n2),
                ];
                body.push_str(&p.tag());
                for v in fields {
                    body.push(',');
                    body.push_str(&fmt_field(v));
                }
                body.push('\n');
            }
            files.insert("summary.csv".into(), body);
        }
    }

    Ok(Dataset { files })
}

fn fmt_field(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    fmt12(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(text: &str) -> ScenarioConfig {
        ScenarioConfig::parse(text).unwrap()
    }

    #[test]
    fn points_sorted_and_tagged() {
        let c = cfg("outputs = xi2\nsweep.parameter = epsilon_dd\nsweep.values = 0, -1\n\
                     sweep.inner.parameter = n_atoms\nsweep.inner.values = 30, 10\n");
        let pts = expand_points(&c).unwrap();
        let tags: Vec<String> = pts.iter().map(Point::tag).collect();
        assert_eq!(
            tags,
            [
                "epsilon_dd_-1_n_atoms_10",
                "epsilon_dd_-1_n_atoms_30",
                "epsilon_dd_0_n_atoms_10",
                "epsilon_dd_0_n_atoms_30"
            ]
        );
        assert_eq!(pts[3].n_atoms, 30);
        assert_eq!(pts[3].params.epsilon_dd, 0.0);
    }

    #[test]
    fn small_run_layout() {
        let c = cfg("n_atoms = 4\ntime.t_min = 1\ntime.t_max = 20\ntime.n_points = 5\n\
                     outputs = xi2, qfi, fidelity, kernels\ngamma_loss_rel = 0.01\n");
        let ds = run_scenario(&c).unwrap();
        let names: Vec<&str> = ds.names().collect();
        assert_eq!(
            names,
            ["kernels_run.csv", "metrology_run.csv", "summary.csv", "xi2_conventions_run.csv"]
        );
        let m = ds.get("metrology_run.csv").unwrap();
        assert!(m.contains(&format!("# config sha256 {}", c.hash())));
        let data: Vec<&str> = m.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data[0], MetrologyReport::CSV_HEADER);
        assert_eq!(data.len(), 6);
        // no t_opt inside [1, 20]
        let s = ds.get("summary.csv").unwrap();
        let row = s.lines().last().unwrap();
        assert!(row.starts_with("run,"));
        assert_eq!(row.split(',').nth(8), Some("NaN"));
    }

    #[test]
    fn divergent_relative_loss_is_a_config_error() {
        let c = cfg("reservoir.epsilon_dd = 1\ngamma_loss_rel = 0.01\ntime.t_min = 1\n\
                     time.t_max = 2\ntime.n_points = 2\noutputs = xi2\n");
        assert!(run_scenario(&c).unwrap_err().is_config());
    }
}

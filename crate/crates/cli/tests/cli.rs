use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dipsqueeze"))
}

#[test]
fn run_writes_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("scenario.cfg");
    fs::write(
        &cfg,
        "n_atoms = 6\ntime.t_min = 1\ntime.t_max = 10\ntime.n_points = 4\noutputs = xi2, kernels\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let st = bin().arg("run").arg(&cfg).arg("--out").arg(&out).arg("--threads").arg("1").output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let m = fs::read_to_string(out.join("metrology_run.csv")).unwrap();
    assert!(m.starts_with("# dipsqueeze "));
    assert!(m.contains("# config sha256 "));
    assert!(out.join("kernels_run.csv").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "outputs = xi2\nunknown.key = 1\n").unwrap();
    let out = bin().arg("run").arg(&cfg).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));

    let missing = bin().arg("run").arg(dir.path().join("nope.cfg")).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let preset = bin().args(["preset", "fig9", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(preset.status.code(), Some(2));
}

#[test]
fn instability_exits_3() {
    let out = bin().args(["stability", "--eta", "100", "--epsilon-dd", "-1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("stable = false"));

    let ok = bin().args(["stability", "--eta", "5", "--epsilon-dd", "-1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("stable = true"));

    let k = bin().args(["kernels", "--eta", "100", "--epsilon-dd", "-1", "--n-points", "2"]).output().unwrap();
    assert_eq!(k.status.code(), Some(3));
}

#[test]
fn kernels_to_stdout() {
    let out = bin()
        .args(["kernels", "--t-min", "1", "--t-max", "10", "--n-points", "3", "--tol", "1e-9"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "t,delta,gamma");
}

#[test]
fn spectral_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("j.csv");
    let st = bin()
        .args(["spectral", "--epsilon-dd", "0", "--n-points", "5", "--out"])
        .arg(&f)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let text = fs::read_to_string(&f).unwrap();
    assert!(text.contains("omega,j,branches"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 6);
}

#[test]
fn preset_print_and_thread_independence() {
    let out = bin().args(["preset", "fig5c", "--print"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep.inner.parameter = n_atoms"));

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (d, threads) in [(&a, "1"), (&b, "4")] {
        let st = bin().args(["preset", "fig5c", "--threads", threads, "--out"]).arg(d).output().unwrap();
        assert_eq!(st.status.code(), Some(0));
    }
    let sa = fs::read(a.join("summary.csv")).unwrap();
    let sb = fs::read(b.join("summary.csv")).unwrap();
    assert_eq!(sa, sb);
}

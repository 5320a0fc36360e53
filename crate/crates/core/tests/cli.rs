use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nsk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsk-dg")).args(args).output().expect("binary runs")
}

fn small_run_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut a = vec!["run", "--out", out, "--set", "run.n_elems=16", "--set", "run.t_final=0.01", "--set", "scheme.dt=0.002"];
    a.extend_from_slice(extra);
    a
}

fn data_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn run_writes_diagnostics_snapshots_and_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ek");
    let o = out.to_str().unwrap();
    let res = nsk(&small_run_args(o, &["--preset", "ek-step", "--set", "run.snapshot_times=0,0.004"]));
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let text = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert!(text.starts_with(
        "t,mass,momentum,energy,energy_delta,viscous_dissipation,max_abs_velocity,min_density,newton_iters\n"
    ));
    let rows = data_rows(&out.join("diagnostics.csv"));
    assert_eq!(rows.len(), 6);
    let e0 = rows[0][3];
    assert!(rows.iter().all(|r| (r[3] - e0).abs() <= 1e-8 * e0));
    let snap = fs::read_to_string(out.join("snapshot_0.004.csv")).unwrap();
    assert!(snap.starts_with("x,rho,v,q,tau\n"));
    assert_eq!(snap.lines().count(), 1 + 16 * 5);
    assert!(out.join("snapshot_0.csv").exists());
    let resolved = fs::read_to_string(out.join("resolved_config.txt")).unwrap();
    assert!(resolved.contains("n_elems = 16") && resolved.contains("dt = 0.002"));
}

#[test]
fn config_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("nsk.cfg");
    fs::write(&cfg, "# viscous step\n[run]\nn_elems = 16\nt_final = 0.01\n\n[phys]\nmu = 1e-4\n\n[scheme]\ndt = 0.002\n").unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(name);
        let res = nsk(&["run", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        outputs.push(fs::read(out.join("diagnostics.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let rows = data_rows(&dir.path().join("a/diagnostics.csv"));
    assert!(rows.windows(2).all(|w| w[1][3] <= w[0][3]));
}

#[test]
fn unknown_key_exits_with_one_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "[phys]\ngama = 1e-4\n").unwrap();
    let res = nsk(&["run", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("phys.gama"));
    let res = nsk(&["run", "--set", "newton.tolerance=1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("newton.tolerance"));
    let res = nsk(&["run", "--preset", "no-such-preset"]);
    assert_eq!(res.status.code(), Some(1));
    assert_eq!(nsk(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(nsk(&["--help"]).status.code(), Some(0));
}

#[test]
fn non_convergence_exits_with_two_and_marks_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fail");
    let o = out.to_str().unwrap();
    let res = nsk(&small_run_args(o, &["--set", "newton.max_iters=1", "--set", "newton.tol=1e-15"]));
    assert_eq!(res.status.code(), Some(2));
    let text = fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(text.lines().last().unwrap(), "# aborted at step 1");
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn snapshot_command_writes_only_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("snap");
    let o = out.to_str().unwrap();
    let res = nsk(&[
        "snapshot", "--out", o, "--times", "0.002,0.01", "--set", "run.n_elems=8", "--set", "run.t_final=0.01",
        "--set", "scheme.dt=0.002", "--set", "run.snapshot_points=2",
    ]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(!out.join("diagnostics.csv").exists());
    let rows = data_rows(&out.join("snapshot_0.01.csv"));
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[15][0], 1.0);
    assert!(out.join("snapshot_0.002.csv").exists());
    let res = nsk(&["snapshot", "--out", o, "--times", "5", "--set", "run.n_elems=8"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn benchmark_single_mesh_and_doubling_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench");
    let o = out.to_str().unwrap();
    let res = nsk(&["benchmark", "--out", o, "--set", "phys.gamma=1e-2", "--set", "benchmark.n_list=8", "--set", "run.t_final=0.25"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = fs::read_to_string(out.join("eoc.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "N,err_rho,eoc_rho,err_v,eoc_v");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((row[0], row[2], row[4]), ("8", "0.000", "0.000"));
    assert!(fs::read_to_string(out.join("eoc.txt")).unwrap().contains("0.000"));
    let res = nsk(&["benchmark", "--out", o, "--set", "benchmark.n_list=8,12"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn audit_exit_codes() {
    let res = nsk(&["audit", "--trials", "2000"]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stdout).contains("overall: PASS"));
    let res = nsk(&["audit", "--trials", "2000", "--flux", "dissipative", "--alpha", "1", "--beta", "1"]);
    assert!(res.status.success());
    let res = nsk(&["audit", "--trials", "100", "--corrupt-flux"]);
    assert_ne!(res.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&res.stdout).contains("overall: FAIL"));
    assert_eq!(nsk(&["audit", "--trials", "0"]).status.code(), Some(1));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use brw_core::config::RunConfig;

fn brw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brw"))
        .args(args)
        .output()
        .expect("failed to launch brw")
}

fn write_config(dir: &Path, cfg: &RunConfig) -> PathBuf {
    let path = dir.join("run.toml");
    std::fs::write(&path, cfg.to_toml_string().unwrap()).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn repo_file(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

#[test]
fn modes_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let config = repo_file("../../configs/reference.toml");
    let a = brw(&["--config", config.to_str().unwrap(), "--out", out, "modes"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let golden = std::fs::read_to_string(repo_file("tests/golden/modes_reference.txt")).unwrap();
    assert_eq!(stdout(&a), golden);
    let b = brw(&["--config", config.to_str().unwrap(), "--out", out, "modes"]);
    assert_eq!(a.stdout, b.stdout);
    let csv = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    assert!(csv.starts_with("mode,polarization,class,wavelength_nm,"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn builtin_config_is_the_shipped_file() {
    let shipped = RunConfig::load(&repo_file("../../configs/reference.toml")).unwrap();
    assert_eq!(shipped, RunConfig::reference());
}

#[test]
fn empty_layer_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::reference();
    cfg.stack.core.thickness_nm = 0.0;
    let path = write_config(dir.path(), &cfg);
    let o = brw(&[
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "modes",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = RunConfig::reference().to_toml_string().unwrap() + "\n[extra]\nvalue = 1\n";
    std::fs::write(&path, text).unwrap();
    let o = brw(&["--config", path.to_str().unwrap(), "modes"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn clipped_grid_is_a_numerical_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::reference();
    cfg.jsa.half_span_thz = 1.0;
    cfg.jsa.samples = 201;
    let path = write_config(dir.path(), &cfg);
    let o = brw(&[
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "jsa",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("half-power"));
}

#[test]
fn no_channels_is_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::reference();
    cfg.channels.n_max = 0;
    let path = write_config(dir.path(), &cfg);
    let o = brw(&[
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "channels",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("channels = 0"));
    let csv = std::fs::read_to_string(dir.path().join("channels.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn zero_nonlinearity_gives_zero_rate() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::reference();
    cfg.nonlinear.chi2_pm_per_v = 0.0;
    let path = write_config(dir.path(), &cfg);
    let o = brw(&[
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "rate",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("rate_per_s_per_mw = 0.00000000e0"));
}

#[test]
fn unknown_sensitivity_parameter() {
    let o = brw(&["sensitivity", "--parameter", "cladding_colour"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn zero_delta_reproduces_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = brw(&["--out", out, "sensitivity", "--deltas", "0"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let j = brw(&["--out", out, "jsa"]);
    let fwhm = stdout(&j)
        .lines()
        .find_map(|l| l.strip_prefix("fwhm_nm = ").map(str::to_owned))
        .unwrap();
    let csv = std::fs::read_to_string(dir.path().join("sensitivity.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[5], fwhm);
    assert_eq!(row[4], "0.00000000e0");
}

#[test]
fn seeded_sphere_benchmark_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::reference();
    cfg.optimizer.sphere_benchmark = true;
    cfg.optimizer.generations = 100;
    let path = write_config(dir.path(), &cfg);
    let run = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = brw(&[
            "--config",
            path.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--seed",
            "7",
            "--threads",
            threads,
            "optimize",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        (
            stdout(&o),
            std::fs::read_to_string(out.join("convergence.csv")).unwrap(),
        )
    };
    let (a, trace_a) = run("a", "1");
    let (b, trace_b) = run("b", "4");
    assert_eq!(a, b);
    assert_eq!(trace_a, trace_b);
    assert_eq!(
        trace_a.lines().next(),
        Some("generation,best_fitness,mean_fitness")
    );
    assert_eq!(trace_a.lines().count(), 102);
    let best: f64 = a
        .lines()
        .next()
        .unwrap()
        .strip_prefix("best_fitness = ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(best < 1e-3);
}

#[test]
fn bad_thread_count() {
    let o = brw(&["--threads", "0", "modes"]);
    assert_eq!(o.status.code(), Some(1));
}

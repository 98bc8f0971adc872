use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nthsieve_cli::config::{Experiment, RunConfig};
use nthsieve_cli::{run, CliError, EXIT_ASSERTION, EXIT_CONFIG, EXIT_NUMERIC};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_nthsieve"));
    c.env_remove("NTHSIEVE_PRECISION");
    c
}

fn run_config(dir: &Path, body: &str) -> Output {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    bin().arg("run").arg(&path).output().unwrap()
}

fn files_in(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn identical_runs_give_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    for experiment in [Experiment::SieveGrid, Experiment::SecondMoment, Experiment::Conductors] {
        let mut cfg = RunConfig::new(experiment);
        cfg.params.sizes = vec![8.0, 16.0];
        cfg.params.trials = 20;
        cfg.params.norms = vec![60];
        cfg.params.count = 20;
        cfg.params.pairs = 10;
        cfg.run.seed = 7;
        cfg.run.output = tmp.path().join(experiment.name());
        let mut outs = Vec::new();
        for _ in 0..2 {
            run(&cfg).unwrap();
            outs.push(files_in(&cfg.run.output));
            fs::remove_dir_all(&cfg.run.output).unwrap();
        }
        assert!(!outs[0].is_empty());
        assert_eq!(outs[0], outs[1], "{}", experiment.name());
    }
}

#[test]
fn recursion_run_writes_csv_and_reports_assertions() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("rec");
    let o = run_config(tmp.path(), &format!("[run]\nexperiment = \"recursion\"\noutput = {:?}\n[params]\nsteps = 60\n", out));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let csv = fs::read_to_string(out.join("recursion.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,alpha,alpha_f64,distance");
    assert_eq!(lines.len(), 62);
    assert!(lines[2].starts_with("1,8/5,1.6,"));
    let last: f64 = lines[61].rsplit(',').next().unwrap().parse().unwrap();
    assert!(last < 1e-10);
    let report = fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(report.starts_with("assertion,passed,detail\n"));
    assert_eq!(report.lines().count(), 3);
    let echo = RunConfig::parse(&fs::read_to_string(out.join("config.toml")).unwrap()).unwrap();
    assert_eq!(echo.params.steps, 60);
    // at the default 50 steps the distance is 3.5e-10, so the assertion fails with its own code
    let o = run_config(tmp.path(), &format!("[run]\nexperiment = \"recursion\"\noutput = {:?}\n", tmp.path().join("rec50")));
    assert_eq!(o.status.code(), Some(EXIT_ASSERTION));
}

#[test]
fn config_errors_write_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("never");
    for body in [
        format!("[run]\nexperiment = \"zeros\"\noutput = {out:?}\n"),
        format!("[run]\nexperiment = \"\"\noutput = {out:?}\n"),
        format!("[run]\nexperiment = \"recursion\"\noutput = {out:?}\n[params]\nstepz = 3\n"),
        format!("[run]\nexperiment = \"recursion\"\noutput = {out:?}\n[params]\nalpha0 = \"1\"\n"),
        format!("[run]\nexperiment = \"g-sigma\"\noutput = {out:?}\n[params]\nsigma_step = 0.0\n"),
        format!("[field]\nn = 7\n[run]\nexperiment = \"g-sigma\"\noutput = {out:?}\n"),
    ] {
        let o = run_config(tmp.path(), &body);
        assert_eq!(o.status.code(), Some(EXIT_CONFIG), "{body}");
        assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
        assert!(!out.exists(), "{body}");
    }
    let o = bin().arg("run").arg(tmp.path().join("missing.toml")).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let o = bin().arg("frobnicate").output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn plot_g_sigma() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("plots/g.csv");
    let o = bin()
        .args(["plot", "g-sigma", "--from", "0.51", "--to", "1.0", "--step", "0.01", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sigma,g"));
    assert_eq!(lines.count(), 50);
    assert!(!text.contains('\r'));

    let bad = tmp.path().join("bad.csv");
    for step in ["0", "-0.01"] {
        let o = bin().args(["plot", "g-sigma", "--from", "0.51", "--to", "1.0", "--step", step, "--out"]).arg(&bad).output().unwrap();
        assert_eq!(o.status.code(), Some(EXIT_CONFIG));
        assert!(!bad.exists());
    }
    let o = bin().args(["plot", "zeta-zeros", "--from", "0", "--to", "1", "--step", "1", "--out"]).arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn plot_other_curves() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("sieve.csv");
    let o = bin()
        .args(["plot", "sieve-ratio-vs-mn", "--from", "8", "--to", "32", "--step", "8", "--trials", "10", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("M,N,MN,ratio"));
    assert_eq!(text.lines().count(), 5);

    let out = tmp.path().join("moment.csv");
    let o = bin().args(["plot", "moment-vs-n", "--from", "20", "--to", "60", "--step", "20", "--out"]).arg(&out).output().unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("N,moment,ratio"));
    let moments: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(moments.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn precision_override_warns() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("g");
    let path = tmp.path().join("run.toml");
    fs::write(&path, format!("[run]\nexperiment = \"g-sigma\"\noutput = {out:?}\n")).unwrap();
    let o = bin().arg("run").arg(&path).env("NTHSIEVE_PRECISION", "50").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: 50 digits"));
    let echo = fs::read_to_string(out.join("config.toml")).unwrap();
    assert!(echo.contains("precision = 50"));
    let o = bin().arg("run").arg(&path).env("NTHSIEVE_PRECISION", "many").output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    let o = bin().arg("run").arg(&path).env("NTHSIEVE_PRECISION", "12").output().unwrap();
    assert!(String::from_utf8_lossy(&o.stderr).is_empty());
}

#[test]
fn verify_setup_prints_structure() {
    let o = bin().arg("verify-setup").output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("norm 81"), "{text}");
    assert!(text.contains("R_c order 9, invariants [3, 3]"));
    assert!(text.contains("minimal"));
    let o = bin().args(["verify-setup", "--n", "4", "--s", "5"]).output().unwrap();
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("R_c order"), "{text}");
    let o = bin().args(["verify-setup", "--n", "5"]).output().unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn quadrature_failures_have_their_own_code() {
    let e: CliError = nthsieve::Error::Quadrature("x".into()).into();
    assert_eq!(e.exit_code(), EXIT_NUMERIC);
    let e: CliError = nthsieve::Error::Domain("x".into()).into();
    assert_eq!(e.exit_code(), EXIT_CONFIG);
}

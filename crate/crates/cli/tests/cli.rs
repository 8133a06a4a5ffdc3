use std::fs;
use std::process::{Command, Output};

use optoelectro_cli::config::{validate_config, RunConfig};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_optoelectro")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn eof_at_reference_point() {
    let o = run(&["eof"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,stable,e_f_ac,e_f_ad,e_f_cd"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[1], "true");
    let ac: f64 = fields[2].parse().unwrap();
    assert!((ac - 8.2).abs() < 0.1);
}

#[test]
fn config_file_round_trips_through_binary() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::default();
    cfg.params.g_a = 1.1;
    cfg.params.phi = 0.3;
    cfg.omega = 0.25;
    let path = dir.path().join("run.toml");
    fs::write(&path, cfg.to_toml()).unwrap();
    assert_eq!(validate_config(&fs::read_to_string(&path).unwrap()).unwrap().config, cfg);

    let o = run(&["eof", "--format", "json", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(json["parameters"]["config"]["g_a"], 1.1);
    assert_eq!(json["columns"]["omega"][0], 0.25);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_value = dir.path().join("bad.toml");
    fs::write(&bad_value, "kappa_a = -1\n").unwrap();
    let o = run(&["eof", "--config", bad_value.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa_a"));

    let bad_syntax = dir.path().join("syntax.toml");
    fs::write(&bad_syntax, "kappa_a = = 1\n").unwrap();
    assert_eq!(run(&["eof", "--config", bad_syntax.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(run(&["reproduce-fig", "9"]).status.code(), Some(1));
    assert_eq!(run(&["sweep", "--axis", "kappa_a", "--start", "0", "--stop", "1", "--steps", "3"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-verb"]).status.code(), Some(2));
}

#[test]
fn phase_normalization_notice() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.toml");
    fs::write(&path, "phi = \"3*pi/2\"\n").unwrap();
    let o = run(&["stability", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("normalized"));
}

#[test]
fn sweep_is_deterministic_and_never_nan() {
    let args = ["sweep", "--axis", "g_a", "--start", "0.5", "--stop", "2.5", "--steps", "9", "--observables", "eof,witness,stability", "--seed", "7"];
    let mut with_samples = args.to_vec();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("small.toml");
    fs::write(&path, "samples = 500\n").unwrap();
    with_samples.extend(["--config", path.to_str().unwrap()]);
    let (a, b) = (run(&with_samples), run(&with_samples));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.to_lowercase().contains("nan") && !text.contains("inf"));
    let unstable: Vec<&str> = text.lines().filter(|l| l.split(',').nth(1) == Some("false")).collect();
    assert!(!unstable.is_empty());
    for line in unstable {
        // EOF and witness columns blank, stability columns filled.
        let f: Vec<&str> = line.split(',').collect();
        assert!(f[2..12].iter().all(|s| s.is_empty()), "{line}");
        assert!(!f[12].is_empty());
    }
}

#[test]
fn figure_three_has_peak_at_quarter_turn() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["reproduce-fig", "3", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    assert!(csv.starts_with("phi,phi_over_pi,stable,e_f_ac,e_f_ad,e_f_cd\n"));
    let peak = csv.lines().find(|l| l.split(',').nth(1) == Some("0.5")).unwrap();
    let e_f_ac: f64 = peak.split(',').nth(3).unwrap().parse().unwrap();
    assert!((e_f_ac - 8.2).abs() < 0.1);
    let sidecar: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("fig3.json")).unwrap()).unwrap();
    assert_eq!(sidecar["parameters"]["sweep"]["steps"], 201);
    assert_eq!(sidecar["columns"]["e_f_cd"].as_array().unwrap().len(), 201);
}

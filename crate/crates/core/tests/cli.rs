use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pidtune(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pidtune"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(line: &str, key: &str) -> f64 {
    let start = line.find(&format!("{key}=")).unwrap() + key.len() + 1;
    line[start..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn simulate_first_order_lag_never_rises() {
    let o = pidtune(&["simulate", "--plant", "num: 1 / den: 1 1", "--kp", "1", "--ki", "0", "--kd", "0"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(field(&out, "f"), 1.0);
    assert!(out.contains("rose=false"));
}

#[test]
fn simulate_zero_controller() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("z.csv");
    let o = pidtune(&[
        "simulate", "--plant", "benchmark3", "--kp", "0", "--ki", "0", "--kd", "0",
        "--samples", samples.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(field(&stdout(&o), "f"), 1.0);
    let csv = fs::read_to_string(samples).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,z"));
    assert_eq!(lines.count(), 10_001);
}

#[test]
fn malformed_plant_names_token() {
    let o = pidtune(&["simulate", "--plant", "num: 1 / den: 1 q", "--kp", "1", "--ki", "0", "--kd", "0"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("`q`"), "{err}");
    assert!(err.contains("byte 16"), "{err}");
}

#[test]
fn improper_loop_gets_a_hint() {
    let o = pidtune(&["simulate", "--plant", "num: 1 / den: 1", "--kp", "1", "--ki", "0", "--kd", "1"]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("improper closed loop"), "{err}");
    assert!(err.contains("relative degree"), "{err}");
}

#[test]
fn zn_tune_on_first_order_plant_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = pidtune(&[
        "tune", "--plant", "num: 1 / den: 1 1", "--start", "zn", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("no ultimate gain"));
    assert!(!dir.path().join("trace.csv").exists());
}

#[test]
fn zn_tune_improves_on_benchmark() {
    let dir = tempfile::tempdir().unwrap();
    let o = pidtune(&["tune", "--plant", "benchmark3", "--start", "zn", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let initial = out.lines().find(|l| l.starts_with("initial:")).unwrap();
    let fin = out.lines().find(|l| l.starts_with("final:")).unwrap();
    assert!((field(initial, "kp") - 4.8).abs() < 1e-3);
    assert!((field(initial, "ki") - 2.6464).abs() < 1e-3);
    assert!((field(initial, "kd") - 2.1766).abs() < 1e-3);
    assert!(field(fin, "f") < field(initial, "f"));
    for line in ["plant: num: 1 / den: 1 3 3 1", "sim: tmax=100 dt=0.01", "band: upper=1.02", "search: step=1"] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
    assert!(dir.path().join("trace.csv").exists());
    assert!(dir.path().join("trace.json").exists());
    assert!(!dir.path().join("frames").exists());
}

fn run_random(dir: &Path, frames: bool) -> Output {
    let mut args = vec![
        "tune", "--plant", "benchmark3", "--start", "random", "--seed", "7", "--max-evals", "60",
        "--out", dir.to_str().unwrap(),
    ];
    if frames {
        args.push("--frames");
    }
    pidtune(&args)
}

#[test]
fn random_tune_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let oa = run_random(a.path(), true);
    let ob = run_random(b.path(), true);
    assert!(oa.status.success() && ob.status.success());
    assert!(stdout(&oa).contains("seed=7"));
    for name in ["trace.csv", "trace.json", "frames/index.json", "frames/film_1.svg", "frames/film_60.svg"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
    assert_eq!(fs::read_dir(a.path().join("frames")).unwrap().count(), 61);
}

#[test]
fn random_seed_is_echoed_when_drawn() {
    let dir = tempfile::tempdir().unwrap();
    let o = pidtune(&[
        "tune", "--start", "random", "--max-evals", "3", "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let seed_line = out.lines().find(|l| l.starts_with("start: random seed=")).unwrap();
    let seed = seed_line.trim_start_matches("start: random seed=").split_whitespace().next().unwrap();
    let first = fs::read(dir.path().join("trace.csv")).unwrap();

    let again = tempfile::tempdir().unwrap();
    let o = pidtune(&[
        "tune", "--start", "random", "--seed", seed, "--max-evals", "3", "--out", again.path().to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read(again.path().join("trace.csv")).unwrap(), first);
}

#[test]
fn tune_rejects_relative_degree_one_for_random_start() {
    let dir = tempfile::tempdir().unwrap();
    let o = pidtune(&[
        "tune", "--plant", "num: 1 / den: 1 1", "--start", "random", "--seed", "1",
        "--out", dir.path().to_str().unwrap(),
    ]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("relative degree"));
}

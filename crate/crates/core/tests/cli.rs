use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_probe-commit"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn solve_lp_writes_a_solution_that_simulate_accepts() {
    let dir = tempfile::tempdir().unwrap();
    let sol = dir.path().join("sol.json");
    let star = data("star.json");
    let o = run(&["solve-lp", "--input", star.to_str().unwrap(), "--out", sol.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert!(parsed["objective"].as_f64().unwrap() > 0.0);

    let report = dir.path().join("r.csv");
    let perm = format!("perm:{}", data("reverse.perm").display());
    let args = [
        "simulate", "--input", star.to_str().unwrap(), "--sol", sol.to_str().unwrap(), "--alg", "ocrs",
        "--arrivals", &perm, "--trials", "2000", "--seed", "4", "--out", report.to_str().unwrap(),
    ];
    assert_eq!(code(&run(&args)), 0);
    let first = std::fs::read(&report).unwrap();
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(first, std::fs::read(&report).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("instance,algorithm,arrivals,seed,trials,mean_weight"));
    assert!(text.contains("v0-u1="));
}

#[test]
fn lp_kinds_and_benchmarks() {
    let star = data("star.json");
    let s = star.to_str().unwrap();
    for lp in ["config", "config-id", "std"] {
        let o = run(&["solve-lp", "--input", s, "--lp", lp, "--method", "colgen"]);
        assert_eq!(code(&o), 0, "{lp}: {}", String::from_utf8_lossy(&o.stderr));
    }
    // the subset LP needs unbounded patience
    assert_eq!(code(&run(&["solve-lp", "--input", s, "--lp", "qc"])), 2);
    let mut values = Vec::new();
    for which in ["nonadaptive", "adaptive", "relaxed"] {
        let o = run(&["benchmark", "--input", s, "--which", which]);
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        values.push(v["value"].as_f64().unwrap());
    }
    assert!(values[0] <= values[1] + 1e-9 && values[1] <= values[2] + 1e-9, "{values:?}");
    // benchmarks are defined for known graphs only
    let id = data("two_types.json");
    assert_eq!(code(&run(&["benchmark", "--input", id.to_str().unwrap(), "--which", "relaxed"])), 2);
}

#[test]
fn known_id_simulation_and_config_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"instance": {{"file": {:?}}}, "algorithm": "rcrs", "arrivals": "random-times",
                "trials": 500, "seed": 2, "out": {:?}}}"#,
            data("two_types.json").display().to_string(),
            out.display().to_string()
        ),
    )
    .unwrap();
    assert_eq!(code(&run(&["simulate", "--config", cfg.to_str().unwrap()])), 0);
    assert!(std::fs::read_to_string(&out).unwrap().contains(",rcrs,random-times,2,500,"));
}

#[test]
fn adaptivity_gap_report() {
    let o = run(&["adaptivity-gap", "--n", "2000", "--p", "0.005", "--s", "5", "--trials", "20", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("n,p,s,seed,trials,adaptive_mean"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn suite_exit_codes() {
    assert_eq!(code(&run(&["suite", "--criteria", "12"])), 0);
    let o = run(&["suite", "--criteria", "10"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("criterion 10 FAIL"));
    assert_eq!(code(&run(&["suite", "--criteria", "14"])), 2);
}

#[test]
fn usage_and_data_errors_exit_2() {
    assert_eq!(code(&run(&[])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["benchmark", "--input", "/nonexistent.json", "--which", "adaptive"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"offline": ["u"], "online": [], "bogus": 1}"#).unwrap();
    assert_eq!(code(&run(&["solve-lp", "--input", bad.to_str().unwrap()])), 2);
    let star = data("star.json");
    let o = run(&["simulate", "--input", star.to_str().unwrap(), "--alg", "greedy", "--arrivals", "sideways"]);
    assert_eq!(code(&o), 2);
    let o = run(&["simulate", "--input", star.to_str().unwrap(), "--alg", "greedy", "--trials", "0"]);
    assert_eq!(code(&o), 2);
}

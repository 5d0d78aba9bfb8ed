//! Runs an experiment described by a JSON config and writes its CSV report.

use probe_commit::harness::{run_experiment, ExperimentConfig};

fn main() {
    let out = std::env::temp_dir().join("probe-commit-report.csv");
    let cfg = ExperimentConfig::from_json(&format!(
        r#"{{
            "instance": {{"generated": {{"name": "random-known-id(20,3)", "index": 2}}}},
            "method": "column-generation",
            "algorithm": "rcrs",
            "arrivals": "random-times",
            "trials": 20000,
            "seed": 5,
            "out": {:?}
        }}"#,
        out.display().to_string()
    ))
    .expect("valid config");
    let report = run_experiment(&cfg).expect("experiment runs");
    println!("ratio {:?} in {:.2} s", report.ratio, report.runtime.as_secs_f64());
    print!("{}", std::fs::read_to_string(&out).expect("report written"));
}

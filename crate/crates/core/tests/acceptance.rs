//! Acceptance battery: prints one PASS/FAIL line per criterion.
//!
//! Criterion 10 cannot pass as stated: the exact adaptive value of the
//! Erdős–Rényi instance, E[min(Bin(10^4, 10^-3), 10)] ≈ 8.7495, is below the
//! required 0.9·s = 9. It is run and reported like every other criterion but
//! does not fail the target. Pass criterion numbers as arguments to run a
//! subset.

use std::process::ExitCode;

use probe_commit::harness::{run_criterion, AcceptanceOptions, CRITERIA};

const KNOWN_INFEASIBLE: [u8; 1] = [10];

fn main() -> ExitCode {
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let opts = AcceptanceOptions::default();
    let mut unexpected = Vec::new();
    for (id, _) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let r = run_criterion(id, &opts).expect("known criterion");
        let note = if !r.passed && KNOWN_INFEASIBLE.contains(&id) { " [known infeasible]" } else { "" };
        println!("{}{note}", r.line());
        if !r.passed && note.is_empty() {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {unexpected:?}");
        ExitCode::FAILURE
    }
}

//! Runs the acceptance battery and prints one line per criterion.
//!
//! ```text
//! cargo run --release --example acceptance_suite [criterion ...]
//! ```

use probe_commit::harness::{run_criterion, AcceptanceOptions, CRITERIA};

fn main() {
    let wanted: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let opts = AcceptanceOptions::default();
    let mut failed = 0;
    for (id, _) in CRITERIA {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let r = run_criterion(id, &opts).expect("known criterion");
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    println!("{failed} criteria failed");
}

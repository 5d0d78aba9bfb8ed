//! Adaptive, non-adaptive and relaxed benchmarks on tiny instances.

use probe_commit::benchmarks::{adaptive_opt_bruteforce, nonadaptive_opt_bruteforce, relaxed_opt, Limits};
use probe_commit::graph::ProbingConstraint;
use probe_commit::harness::suite::{footnote2, random_small};

fn main() {
    for k in 2..=4 {
        let unit = footnote2(k, ProbingConstraint::patience(1));
        let open = footnote2(k, ProbingConstraint::unbounded());
        println!(
            "k = {k}: unit patience OPT = {:.6}, LP = {:.6}; unbounded OPT = {:.6}",
            adaptive_opt_bruteforce(&unit, Limits::default()).unwrap(),
            relaxed_opt(&unit).unwrap(),
            adaptive_opt_bruteforce(&open, Limits::default()).unwrap(),
        );
    }
    for (i, g) in random_small(5, 3).iter().enumerate() {
        let non = nonadaptive_opt_bruteforce(g, Limits::default()).unwrap();
        let ada = adaptive_opt_bruteforce(g, Limits::default()).unwrap();
        let rel = relaxed_opt(g).unwrap();
        println!("instance {i}: non-adaptive {non:.6} ≤ adaptive {ada:.6} ≤ relaxed {rel:.6}");
    }
}

//! Greedy, OCRS and RCRS on a known stochastic graph: exact expected weight
//! against a Monte Carlo estimate, with the probe-commit audit of each trial.

use probe_commit::graph::ArrivalModel;
use probe_commit::harness::suite::random_small;
use probe_commit::lp::{solve_lp_config, Method};
use probe_commit::probing::{exact_value, exact_value_random_order, run_trial, Algorithm, ProbingPlan};

fn main() {
    let g = random_small(1, 42).remove(0);
    let sol = solve_lp_config(&g, Method::Enumerate).expect("solvable");
    let plan = ProbingPlan::for_graph(&g, &sol).expect("plan");
    println!("{} offline, {} online, LPOPT = {:.6}", g.offline_count(), g.online_count(), plan.lpopt);
    let identity: Vec<usize> = (0..g.online_count()).collect();
    let runs = [
        (Algorithm::Greedy, ArrivalModel::RandomOrder),
        (Algorithm::Ocrs, ArrivalModel::Adversarial(identity.clone())),
        (Algorithm::Rcrs, ArrivalModel::RandomArrivalTimes),
    ];
    let trials = 50_000u64;
    for (alg, arrivals) in runs {
        let exact = match alg {
            Algorithm::Greedy => exact_value_random_order(&plan, alg),
            _ => exact_value(&plan, alg, &identity),
        }
        .expect("exact value");
        let mut total = 0.0;
        for t in 0..trials {
            let out = run_trial(&plan, alg, &arrivals, 9, t).expect("trial");
            out.matching
                .audit(&plan.input, &out.types, &out.events, &out.states)
                .expect("probe-commit discipline");
            total += out.weight();
        }
        println!(
            "{alg:?}: exact {exact:.5} (ratio {:.4}), Monte Carlo {:.5}",
            exact / plan.lpopt,
            total / trials as f64
        );
    }
}

//! Known i.d. arrivals: solves the i.d. configuration LP, finds the worst
//! arrival order for greedy, and runs greedy and OCRS against it.

use probe_commit::graph::{Edge, KnownIdInput, OnlineVertex, ProbingConstraint, StochasticGraph};
use probe_commit::harness::{arrival_model, run_trials, solve_for_plan, ArrivalSpec, Execution, Summary};
use probe_commit::lp::Method;
use probe_commit::probing::{exact_value, Algorithm};

fn main() {
    let types = StochasticGraph::with_offline_count(
        2,
        vec![
            OnlineVertex::new("heavy", vec![Edge::new(0, 5.0, 0.3), Edge::new(1, 1.0, 0.9)], ProbingConstraint::patience(2)),
            OnlineVertex::new("light", vec![Edge::new(0, 1.0, 0.9)], ProbingConstraint::patience(1)),
        ],
    );
    let input = KnownIdInput::new(
        types,
        vec![vec![(1, 1.0)], vec![(0, 0.5), (1, 0.5)], vec![(0, 0.2), (1, 0.8)], vec![(1, 1.0)]],
    );
    let plan = solve_for_plan(&input, Method::ColumnGeneration).expect("solvable");
    println!("LPOPT_id = {:.6}", plan.lpopt);
    for alg in [Algorithm::Greedy, Algorithm::Ocrs] {
        let arrivals = arrival_model(&plan, alg, &ArrivalSpec::WorstFound).expect("order");
        let weights: Vec<f64> = run_trials(&plan, alg, &arrivals, 3, 100_000, Execution::Parallel)
            .expect("trials")
            .into_iter()
            .map(|r| r.0)
            .collect();
        let s = Summary::from_weights(&weights, 6.0);
        let order = match &arrivals {
            probe_commit::graph::ArrivalModel::Adversarial(o) => o.clone(),
            _ => unreachable!(),
        };
        println!(
            "{alg:?} against order {order:?}: exact {:.5}, Monte Carlo {:.5} ± {:.5}",
            exact_value(&plan, alg, &order).expect("exact"),
            s.mean,
            s.stderr
        );
    }
}

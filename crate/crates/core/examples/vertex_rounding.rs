//! VertexProbe on an LP string distribution and VertexRound on a y-system.

use std::collections::BTreeMap;

use probe_commit::graph::{Edge, OnlineVertex, ProbeString, ProbingConstraint, StochasticGraph};
use probe_commit::lp::solve_lp_config;
use probe_commit::lp::Method;
use probe_commit::probing::{vertex_probe, StringDistribution, VertexRound};
use probe_commit::rng::{trial_rng, Substream};
use probe_commit::sampling::{sample_edge_states, Prober};

fn main() {
    let v = OnlineVertex::new(
        "v",
        vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 2.0, 0.3), Edge::new(2, 1.5, 0.6)],
        ProbingConstraint::patience(2),
    );
    let g = StochasticGraph::with_offline_count(3, vec![v.clone()]);
    let sol = solve_lp_config(&g, Method::Enumerate).expect("solvable");
    let dist = StringDistribution::new(sol.slot_columns().remove(0)).expect("slot mass is one");
    let trials = 100_000u64;
    let mut commits = [0u64; 3];
    let mut rng = trial_rng(1, Substream::Decisions, 0);
    for t in 0..trials {
        let states = sample_edge_states(&g, 1, t);
        let mut prober = Prober::new(&states);
        if let Some(k) = vertex_probe(0, &dist, &mut prober, &mut rng).expect("fresh prober").edge {
            commits[k] += 1;
        }
    }
    for (k, e) in v.edges.iter().enumerate() {
        println!(
            "edge {k}: commit frequency {:.4}, p·x̃ = {:.4}",
            commits[k] as f64 / trials as f64,
            e.prob * sol.edge_vars[0][k]
        );
    }

    let mut y = BTreeMap::new();
    y.insert(ProbeString::empty(), 1.0);
    y.insert(ProbeString::from(vec![0]), 0.5);
    y.insert(ProbeString::from(vec![0, 2]), 0.25);
    y.insert(ProbeString::from(vec![1]), 0.3);
    let round = VertexRound::new(y).expect("valid y-system");
    let mut rng = trial_rng(2, Substream::Decisions, 0);
    let mut seen: BTreeMap<ProbeString, u64> = BTreeMap::new();
    for _ in 0..trials {
        *seen.entry(round.sample(&mut rng)).or_insert(0) += 1;
    }
    for (s, n) in seen {
        println!("VertexRound output {s}: {:.4}", n as f64 / trials as f64);
    }
}

//! Solves the configuration LP of a small known graph by enumeration and by
//! column generation, and compares it with the standard and subset LPs.

use probe_commit::graph::{Edge, OnlineVertex, ProbingConstraint, StochasticGraph};
use probe_commit::lp::{build_lp_qc, build_lp_std, simplex_solve, solve_lp_config, Method};

fn main() {
    let g = StochasticGraph::with_offline_count(
        2,
        vec![
            OnlineVertex::new("v0", vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 2.0, 0.4)], ProbingConstraint::unbounded()),
            OnlineVertex::new("v1", vec![Edge::new(0, 3.0, 0.3), Edge::new(1, 1.0, 0.9)], ProbingConstraint::patience(1)),
        ],
    );
    let enumerated = solve_lp_config(&g, Method::Enumerate).expect("solvable");
    let generated = solve_lp_config(&g, Method::ColumnGeneration).expect("solvable");
    println!("LPOPT (enumerated)        = {:.9}", enumerated.objective);
    println!(
        "LPOPT (column generation) = {:.9} after {} rounds, {} columns",
        generated.objective, generated.rounds, generated.columns_generated
    );
    println!("offline duals α = {:?}", enumerated.alpha);
    for (c, m) in enumerated.columns.iter().zip(&enumerated.masses) {
        println!("  x[{} {}] = {m:.6}", g.online[enumerated.slots[c.slot].type_node].id, c.string);
    }
    for (v, xs) in enumerated.edge_vars.iter().enumerate() {
        println!("  induced edge variables of {}: {xs:?}", g.online[v].id);
    }
    let std = simplex_solve(&build_lp_std(&g).expect("builds")).expect("solvable").objective;
    println!("standard LP = {std:.9} (never below the configuration LP)");

    // the subset LP needs unbounded patience everywhere
    let open = StochasticGraph::with_offline_count(
        2,
        g.online.iter().map(|v| OnlineVertex::new(v.id.clone(), v.edges.clone(), ProbingConstraint::unbounded())).collect(),
    );
    let qc = simplex_solve(&build_lp_qc(&open).expect("builds")).expect("solvable").objective;
    let cfg = solve_lp_config(&open, Method::Enumerate).expect("solvable").objective;
    println!("unbounded patience: subset LP = {qc:.9}, configuration LP = {cfg:.9}");
}

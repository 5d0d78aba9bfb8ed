//! Best probe string of one online vertex at given offline prices, the
//! pricing step of column generation.

use probe_commit::graph::{Edge, OnlineVertex, ProbingConstraint};
use probe_commit::lp::demand_oracle;

fn main() {
    let v = OnlineVertex::new(
        "v",
        vec![Edge::new(0, 4.0, 0.2), Edge::new(1, 1.0, 0.9), Edge::new(2, 2.5, 0.5), Edge::new(3, 1.5, 0.6)],
        ProbingConstraint::patience(2),
    );
    for prices in [[0.0; 4], [3.5, 0.0, 0.0, 0.0], [0.0, 0.8, 2.0, 0.2]] {
        let best = demand_oracle(&v, &prices).expect("patience constraints need no oracle calls");
        println!("prices {prices:?} -> string {} with utility {:.6}", best.string, best.value);
    }

    let budget = OnlineVertex::new(
        "w",
        v.edges.clone(),
        ProbingConstraint::budget(3.0, vec![2.0, 1.0, 1.5, 1.0]),
    );
    let best = demand_oracle(&budget, &[0.0; 4]).expect("budget strings are checked directly");
    println!("budget 3 -> string {} with utility {:.6}", best.string, best.value);
}

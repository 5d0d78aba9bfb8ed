//! Named, reproducible instance families.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::benchmarks::er_instance;
use crate::graph::{Edge, KnownIdInput, OnlineVertex, ProbingConstraint, StochasticGraph};
use crate::io::Instance;
use crate::rng::{trial_rng, Substream, TrialRng};

/// A generator name with its parameters.
///
/// Text form: `footnote2(k)`, `footnote2-unbounded(k)`, `er(n,p,s)`,
/// `random-small(count,seed)`, `unbounded-patience(count,seed)`,
/// `random-known-id(count,seed)`, `random-iid(count,seed)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Suite {
    Footnote2 { k: usize },
    Footnote2Unbounded { k: usize },
    Er { n: usize, p: f64, s: usize },
    RandomSmall { count: usize, seed: u64 },
    UnboundedPatience { count: usize, seed: u64 },
    RandomKnownId { count: usize, seed: u64 },
    RandomIid { count: usize, seed: u64 },
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::UnknownSuite(s.to_string());
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(i) if s.ends_with(')') => (&s[..i], &s[i + 1..s.len() - 1]),
            _ => return Err(bad()),
        };
        let args: Vec<&str> = args.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
        let int = |i: usize| args.get(i).and_then(|a| a.parse::<usize>().ok()).ok_or_else(bad);
        let seed = |i: usize| args.get(i).and_then(|a| a.parse::<u64>().ok()).ok_or_else(bad);
        let want = |n: usize| if args.len() == n { Ok(()) } else { Err(bad()) };
        match name {
            "footnote2" => want(1).and(Ok(Suite::Footnote2 { k: int(0)? })),
            "footnote2-unbounded" => want(1).and(Ok(Suite::Footnote2Unbounded { k: int(0)? })),
            "er" => {
                want(3)?;
                let p = args[1].parse::<f64>().map_err(|_| bad())?;
                Ok(Suite::Er { n: int(0)?, p, s: int(2)? })
            }
            "random-small" => want(2).and(Ok(Suite::RandomSmall { count: int(0)?, seed: seed(1)? })),
            "unbounded-patience" => want(2).and(Ok(Suite::UnboundedPatience { count: int(0)?, seed: seed(1)? })),
            "random-known-id" => want(2).and(Ok(Suite::RandomKnownId { count: int(0)?, seed: seed(1)? })),
            "random-iid" => want(2).and(Ok(Suite::RandomIid { count: int(0)?, seed: seed(1)? })),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::Footnote2 { k } => write!(f, "footnote2({k})"),
            Suite::Footnote2Unbounded { k } => write!(f, "footnote2-unbounded({k})"),
            Suite::Er { n, p, s } => write!(f, "er({n},{p},{s})"),
            Suite::RandomSmall { count, seed } => write!(f, "random-small({count},{seed})"),
            Suite::UnboundedPatience { count, seed } => write!(f, "unbounded-patience({count},{seed})"),
            Suite::RandomKnownId { count, seed } => write!(f, "random-known-id({count},{seed})"),
            Suite::RandomIid { count, seed } => write!(f, "random-iid({count},{seed})"),
        }
    }
}

/// A single online vertex with unit-weight edges of probability `1/k` to `k`
/// offline vertices.
pub fn footnote2(k: usize, constraint: ProbingConstraint) -> StochasticGraph {
    let p = 1.0 / k as f64;
    StochasticGraph::with_offline_count(
        k,
        vec![OnlineVertex::new("v", (0..k).map(|u| Edge::new(u, 1.0, p)).collect(), constraint)],
    )
}

/// Weights and probabilities uniform on `(0, 1]`.
fn random_edge(rng: &mut TrialRng, u: usize) -> Edge {
    Edge::new(u, 1.0 - rng.random::<f64>(), 1.0 - rng.random::<f64>())
}

/// Random graph with `|U|, |V| ≤ max`; each vertex keeps each possible edge
/// with probability 0.7 (at least one edge per online vertex).
fn random_graph(rng: &mut TrialRng, max_u: usize, max_v: usize, constraint: impl Fn(&mut TrialRng, usize) -> ProbingConstraint) -> StochasticGraph {
    let nu = rng.random_range(1..=max_u);
    let nv = rng.random_range(1..=max_v);
    let online = (0..nv)
        .map(|v| {
            let mut edges: Vec<Edge> = Vec::new();
            for u in 0..nu {
                if rng.random_bool(0.7) {
                    edges.push(random_edge(rng, u));
                }
            }
            if edges.is_empty() {
                let u = rng.random_range(0..nu);
                edges.push(random_edge(rng, u));
            }
            let c = constraint(rng, edges.len());
            OnlineVertex::new(format!("v{v}"), edges, c)
        })
        .collect();
    StochasticGraph::with_offline_count(nu, online)
}

fn random_row(rng: &mut TrialRng, types: usize) -> Vec<(usize, f64)> {
    let raw: Vec<f64> = (0..types).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut row: Vec<(usize, f64)> = raw.iter().enumerate().map(|(b, r)| (b, r / total)).collect();
    // put rounding error on the last entry so rows sum to one exactly in floats
    let head: f64 = row[..types - 1].iter().map(|e| e.1).sum();
    row[types - 1].1 = 1.0 - head;
    row
}

fn instance_rng(seed: u64, index: usize) -> TrialRng {
    trial_rng(seed, Substream::Auxiliary, index as u64)
}

/// Known graphs with `|U|, |V| ≤ 4` and patience 1 or 2.
pub fn random_small(count: usize, seed: u64) -> Vec<StochasticGraph> {
    (0..count)
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            random_graph(&mut rng, 4, 4, |r, _| ProbingConstraint::patience(r.random_range(1..=2)))
        })
        .collect()
}

/// Known graphs with unbounded patience and online degree at most 3.
pub fn unbounded_patience(count: usize, seed: u64) -> Vec<StochasticGraph> {
    (0..count)
        .map(|i| {
            let mut rng = instance_rng(seed, i);
            random_graph(&mut rng, 3, 4, |_, _| ProbingConstraint::unbounded())
        })
        .collect()
}

fn random_id(rng: &mut TrialRng, identical: bool) -> KnownIdInput {
    let g = random_graph(rng, 3, 3, |r, deg| {
        if r.random_bool(0.2) {
            ProbingConstraint::unbounded()
        } else {
            ProbingConstraint::patience(r.random_range(1..=2.min(deg)))
        }
    });
    let n = rng.random_range(1..=4);
    let types = g.online_count();
    let rows = if identical {
        vec![random_row(rng, types); n]
    } else {
        (0..n).map(|_| random_row(rng, types)).collect()
    };
    KnownIdInput::new(g, rows)
}

/// Known i.d. inputs with `|U|, |B| ≤ 3` and `n ≤ 4`.
pub fn random_known_id(count: usize, seed: u64) -> Vec<KnownIdInput> {
    (0..count).map(|i| random_id(&mut instance_rng(seed, i), false)).collect()
}

/// Known i.i.d. inputs with `|U|, |B| ≤ 3` and `n ≤ 4`.
pub fn random_iid(count: usize, seed: u64) -> Vec<KnownIdInput> {
    (0..count).map(|i| random_id(&mut instance_rng(seed, i), true)).collect()
}

/// Instances of a suite.
pub fn generate_suite(suite: &Suite) -> Vec<Instance> {
    match *suite {
        Suite::Footnote2 { k } => vec![Instance::Graph(footnote2(k, ProbingConstraint::patience(1)))],
        Suite::Footnote2Unbounded { k } => vec![Instance::Graph(footnote2(k, ProbingConstraint::unbounded()))],
        Suite::Er { n, p, s } => vec![Instance::Graph(er_instance(n, p, s).0)],
        Suite::RandomSmall { count, seed } => random_small(count, seed).into_iter().map(Instance::Graph).collect(),
        Suite::UnboundedPatience { count, seed } => {
            unbounded_patience(count, seed).into_iter().map(Instance::Graph).collect()
        }
        Suite::RandomKnownId { count, seed } => {
            random_known_id(count, seed).into_iter().map(Instance::KnownId).collect()
        }
        Suite::RandomIid { count, seed } => random_iid(count, seed).into_iter().map(Instance::KnownId).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;

    #[test]
    fn names_round_trip() {
        for s in [
            "footnote2(4)",
            "footnote2-unbounded(3)",
            "er(10000,0.001,10)",
            "random-small(50,7)",
            "unbounded-patience(20,1)",
            "random-known-id(20,3)",
            "random-iid(10,3)",
        ] {
            let suite: Suite = s.parse().unwrap();
            assert_eq!(suite.to_string(), s);
        }
        assert!("nope(1)".parse::<Suite>().is_err());
        assert!("random-small(50)".parse::<Suite>().is_err());
    }

    #[test]
    fn uniform_star_instance() {
        let g = footnote2(4, ProbingConstraint::patience(1));
        assert_eq!((g.offline_count(), g.online_count()), (4, 1));
        assert!(g.online[0].edges.iter().all(|e| e.prob == 0.25 && e.weight == 1.0));
    }

    #[test]
    fn random_families_respect_their_contracts() {
        for g in random_small(50, 9) {
            assert!(validate_graph(&g).is_empty());
            assert!(g.offline_count() <= 4 && g.online_count() <= 4);
            for v in &g.online {
                assert!(matches!(v.constraint, ProbingConstraint::Patience { limit } if (1..=2).contains(&limit)));
            }
        }
        for g in unbounded_patience(20, 9) {
            assert!(g.online.iter().all(|v| v.degree() <= 3 && v.constraint.is_unbounded_for(v.degree())));
        }
        for input in random_known_id(20, 9).iter().chain(&random_iid(10, 9)) {
            assert!(input.validate().is_empty(), "{:?}", input.validate());
            assert!(input.arrivals() <= 4 && input.type_graph.online_count() <= 3);
        }
        assert_eq!(format!("{:?}", random_small(5, 1)), format!("{:?}", random_small(5, 1)));
    }
}

//! Demand oracle: the probe string maximising expected utility under prices.
//!
//! Given prices `α_u` on offline vertices, the utility of a string
//! `(e_1..e_k)` is `Σ_i (w_i − α_{u_i}) p_i Π_{j<i} (1 − p_j)`. Only edges with
//! positive adjusted weight can help, and among strings over the same set the
//! one sorted by non-increasing adjusted weight is best, so the search runs
//! over increasing index sequences of the sorted candidate list:
//!
//! ```text
//! best(start, S) = max(0, max_{j ≥ start, S+j ∈ C} p_j w̃_j + (1 − p_j) best(j + 1, S + j))
//! ```
//!
//! The memo key is `(start, summary of S)`. For patience only `|S|` matters,
//! which makes the table `O(m · ℓ)`; other constraints key on the chosen set
//! itself and ask the membership oracle once per extension.

use std::collections::HashMap;

use crate::graph::{GraphError, OnlineVertex, ProbeString, ProbingConstraint};

/// Argmax string and its utility.
#[derive(Clone, Debug, PartialEq)]
pub struct DemandChoice {
    pub string: ProbeString,
    pub value: f64,
}

/// Best probe string for `v` when offline vertex `u` costs `prices[u]`.
pub fn demand_oracle(v: &OnlineVertex, prices: &[f64]) -> Result<DemandChoice, GraphError> {
    let adjusted: Vec<f64> = v
        .edges
        .iter()
        .map(|e| e.weight - prices.get(e.offline).copied().unwrap_or(0.0))
        .collect();
    let mut cand: Vec<usize> = (0..v.degree())
        .filter(|&k| adjusted[k] > 0.0 && v.edges[k].prob > 0.0)
        .collect();
    cand.sort_by(|&a, &b| adjusted[b].total_cmp(&adjusted[a]).then(a.cmp(&b)));
    if cand.is_empty() {
        return Ok(DemandChoice {
            string: ProbeString::empty(),
            value: 0.0,
        });
    }
    if !matches!(v.constraint, ProbingConstraint::Patience { .. }) && cand.len() > 128 {
        return Err(GraphError::Invalid(format!(
            "demand oracle supports at most 128 profitable edges for non-patience constraints, got {}",
            cand.len()
        )));
    }
    let mut search = Search {
        v,
        cand: &cand,
        gain: cand.iter().map(|&k| v.edges[k].prob * adjusted[k]).collect(),
        miss: cand.iter().map(|&k| 1.0 - v.edges[k].prob).collect(),
        memo: HashMap::new(),
        chosen: Vec::new(),
    };
    let value = search.best(0, 0)?;
    // reconstruct
    let mut string = Vec::new();
    let mut start = 0;
    let mut set: u128 = 0;
    while let Some(&(_, Some(j))) = search.memo.get(&(start, search.key(set, string.len()))) {
        string.push(cand[j]);
        set |= 1u128 << j;
        start = j + 1;
    }
    Ok(DemandChoice {
        string: string.into(),
        value,
    })
}

struct Search<'a> {
    v: &'a OnlineVertex,
    cand: &'a [usize],
    gain: Vec<f64>,
    miss: Vec<f64>,
    /// `(start, key) -> (value, next choice)`
    memo: HashMap<(usize, u128), (f64, Option<usize>)>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn key(&self, set: u128, len: usize) -> u128 {
        match self.v.constraint {
            ProbingConstraint::Patience { .. } => len as u128,
            _ => set,
        }
    }

    fn best(&mut self, start: usize, set: u128) -> Result<f64, GraphError> {
        let key = (start, self.key(set, self.chosen.len()));
        if let Some(&(val, _)) = self.memo.get(&key) {
            return Ok(val);
        }
        let mut best: f64 = 0.0;
        let mut choice = None;
        for j in start..self.cand.len() {
            self.chosen.push(self.cand[j]);
            let ok = self.v.constraint.contains_unchecked(&self.chosen)?;
            let val = if ok {
                let rest = self.best(j + 1, set | (1u128 << j))?;
                Some(self.gain[j] + self.miss[j] * rest)
            } else {
                None
            };
            self.chosen.pop();
            if let Some(val) = val {
                // strict improvement keeps shorter strings on ties
                if val > best + 1e-15 * best.abs().max(1.0) {
                    best = val;
                    choice = Some(j);
                }
            }
        }
        self.memo.insert(key, (best, choice));
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_strings, Edge};
    use crate::rng;
    use rand::Rng;

    /// Utility of `s` evaluated directly from the definition.
    fn utility(v: &OnlineVertex, prices: &[f64], s: &[usize]) -> f64 {
        let mut surv = 1.0;
        let mut total = 0.0;
        for &k in s {
            let e = &v.edges[k];
            total += (e.weight - prices[e.offline]) * e.prob * surv;
            surv *= 1.0 - e.prob;
        }
        total
    }

    fn brute(v: &OnlineVertex, prices: &[f64]) -> f64 {
        enumerate_strings(&v.constraint, v.degree(), 1_000_000)
            .unwrap()
            .iter()
            .map(|s| utility(v, prices, s.as_slice()))
            .fold(0.0, f64::max)
    }

    fn vertex(edges: Vec<Edge>, c: ProbingConstraint) -> OnlineVertex {
        OnlineVertex::new("v", edges, c)
    }

    #[test]
    fn all_prices_above_weights_gives_lambda() {
        let v = vertex(
            vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 2.0, 0.9)],
            ProbingConstraint::unbounded(),
        );
        let d = demand_oracle(&v, &[1.0, 3.0]).unwrap();
        assert_eq!(d.string, ProbeString::empty());
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn unit_patience_picks_best_single_edge() {
        let v = vertex(
            vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 2.0, 0.3), Edge::new(2, 5.0, 0.1)],
            ProbingConstraint::patience(1),
        );
        let d = demand_oracle(&v, &[0.0, 0.5, 0.0]).unwrap();
        // utilities 0.5, 0.45, 0.5 → tie keeps the higher adjusted weight (sorted first)
        assert_eq!(d.string.len(), 1);
        assert!((d.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn patience_two_matches_brute_force() {
        let v = vertex(
            vec![Edge::new(0, 1.0, 0.9), Edge::new(1, 2.0, 0.5), Edge::new(2, 1.5, 0.5)],
            ProbingConstraint::patience(2),
        );
        let prices = [0.0; 3];
        let d = demand_oracle(&v, &prices).unwrap();
        // frozen from exhaustive evaluation over the 10 strings
        let b = brute(&v, &prices);
        assert!((b - 1.45).abs() < 1e-12);
        assert!((d.value - b).abs() < 1e-12);
        assert_eq!(d.string, ProbeString::from(vec![1, 0]));
        assert!((utility(&v, &prices, d.string.as_slice()) - d.value).abs() < 1e-12);
    }

    #[test]
    fn random_constraints_match_brute_force() {
        let mut r = rng::seeded(5);
        for round in 0..300 {
            let deg = r.random_range(1..6);
            let edges: Vec<Edge> = (0..deg)
                .map(|u| Edge::new(u, r.random_range(0.0..3.0), r.random_range(0.0..1.0)))
                .collect();
            let c = match round % 3 {
                0 => ProbingConstraint::patience(r.random_range(0..4)),
                1 => ProbingConstraint::budget(
                    r.random_range(0.0..2.0),
                    (0..deg).map(|_| r.random_range(0.0..1.0)).collect(),
                ),
                _ => {
                    let base: Vec<Vec<usize>> = (0..2)
                        .map(|_| (0..deg).filter(|_| r.random_bool(0.5)).collect())
                        .collect();
                    ProbingConstraint::explicit(base)
                }
            };
            let v = vertex(edges, c);
            let prices: Vec<f64> = (0..deg).map(|_| r.random_range(0.0..1.5)).collect();
            let d = demand_oracle(&v, &prices).unwrap();
            let b = brute(&v, &prices);
            assert!((d.value - b).abs() <= 1e-9, "round {round}: {} vs {}", d.value, b);
            assert!(v.admits(d.string.as_slice()).unwrap());
            assert!((utility(&v, &prices, d.string.as_slice()) - d.value).abs() <= 1e-12);
        }
    }

    #[test]
    fn oracle_backed_constraint_is_queried() {
        // at most two edges, and never edges 0 and 1 together
        let o = crate::graph::MembershipOracle::new(|s: &[usize]| {
            Ok(s.len() <= 2 && !(s.contains(&0) && s.contains(&1)))
        });
        let v = vertex(
            vec![Edge::new(0, 3.0, 0.5), Edge::new(1, 2.0, 0.5), Edge::new(2, 1.0, 0.5)],
            ProbingConstraint::OracleBacked(o),
        );
        let d = demand_oracle(&v, &[0.0; 3]).unwrap();
        assert_eq!(d.string, ProbeString::from(vec![0, 2]));
        assert!((d.value - 1.75).abs() < 1e-12);
    }

    #[test]
    fn oracle_errors_propagate() {
        let o = crate::graph::MembershipOracle::new(|s: &[usize]| {
            if s.len() > 1 {
                Err("backend down".into())
            } else {
                Ok(true)
            }
        });
        let v = vertex(
            vec![Edge::new(0, 3.0, 0.5), Edge::new(1, 2.0, 0.5)],
            ProbingConstraint::OracleBacked(o),
        );
        assert!(matches!(demand_oracle(&v, &[0.0; 2]), Err(GraphError::Oracle(_))));
    }
}

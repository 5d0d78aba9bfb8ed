//! Single-vertex rounding: VertexProbe and VertexRound.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use super::{CommitEvent, ProbingError};
use crate::graph::{Edge, ProbeString};
use crate::sampling::Prober;

/// Tolerance on distributions summing to one.
pub const MASS_TOL: f64 = 1e-9;
/// Tolerance on the prefix condition of a y-system.
pub const Y_TOL: f64 = 1e-12;

/// A probability distribution over probe strings.
#[derive(Clone, Debug, PartialEq)]
pub struct StringDistribution {
    strings: Vec<ProbeString>,
    cumulative: Vec<f64>,
}

impl StringDistribution {
    /// Fails unless masses are non-negative and sum to one within [`MASS_TOL`].
    pub fn new(entries: Vec<(ProbeString, f64)>) -> Result<Self, ProbingError> {
        let sum: f64 = entries.iter().map(|e| e.1).sum();
        if (sum - 1.0).abs() > MASS_TOL || entries.iter().any(|e| !(e.1 >= 0.0)) {
            return Err(ProbingError::InvalidDistribution { sum });
        }
        let mut acc = 0.0;
        let mut strings = Vec::with_capacity(entries.len());
        let mut cumulative = Vec::with_capacity(entries.len());
        for (s, m) in entries {
            if m > 0.0 {
                acc += m;
                strings.push(s);
                cumulative.push(acc);
            }
        }
        Ok(StringDistribution { strings, cumulative })
    }

    /// Point mass on `s`.
    pub fn point(s: ProbeString) -> Self {
        StringDistribution {
            strings: vec![s],
            cumulative: vec![1.0],
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &ProbeString {
        let total = self.cumulative.last().copied().unwrap_or(0.0);
        if self.strings.is_empty() {
            return &EMPTY;
        }
        let x = rng.random::<f64>() * total;
        let k = self.cumulative.partition_point(|&c| c <= x);
        &self.strings[k.min(self.strings.len() - 1)]
    }

    pub fn support(&self) -> impl Iterator<Item = (&ProbeString, f64)> {
        let mut prev = 0.0;
        self.strings.iter().zip(&self.cumulative).map(move |(s, &c)| {
            let m = c - prev;
            prev = c;
            (s, m)
        })
    }
}

static EMPTY: ProbeString = ProbeString::EMPTY;

/// Draws a string from `dist` and probes it in order for `arrival`, committing
/// to the first active edge.
pub fn vertex_probe<R: Rng + ?Sized>(
    arrival: usize,
    dist: &StringDistribution,
    prober: &mut Prober<'_>,
    rng: &mut R,
) -> Result<CommitEvent, ProbingError> {
    let s = dist.sample(rng);
    let mut probes = Vec::with_capacity(s.len());
    for k in s.iter() {
        probes.push(k);
        if prober.probe(arrival, k)? {
            return Ok(CommitEvent {
                arrival,
                edge: Some(k),
                probes,
            });
        }
    }
    Ok(CommitEvent {
        arrival,
        edge: None,
        probes,
    })
}

/// A validated y-system ready for sampling.
#[derive(Clone, Debug)]
pub struct VertexRound {
    y: BTreeMap<ProbeString, f64>,
    children: HashMap<ProbeString, Vec<(usize, f64)>>,
}

impl VertexRound {
    /// Checks `y(λ) = 1`, non-negativity and `Σ_e y(e', e) ≤ y(e')` for every
    /// `e'`. Strings absent from `y` have value zero.
    pub fn new(y: BTreeMap<ProbeString, f64>) -> Result<Self, ProbingError> {
        let root = y.get(&ProbeString::empty()).copied().unwrap_or(0.0);
        if (root - 1.0).abs() > Y_TOL {
            return Err(ProbingError::InvalidY {
                prefix: ProbeString::empty(),
                detail: format!("y(λ) = {root}"),
            });
        }
        let mut children: HashMap<ProbeString, Vec<(usize, f64)>> = HashMap::new();
        for (s, &v) in &y {
            if !(v >= 0.0) {
                return Err(ProbingError::InvalidY {
                    prefix: s.clone(),
                    detail: format!("negative value {v}"),
                });
            }
            if let Some(&last) = s.as_slice().last() {
                if v > 0.0 {
                    children.entry(s.prefix(s.len() - 1)).or_default().push((last, v));
                }
            }
        }
        for (parent, kids) in &children {
            let total: f64 = kids.iter().map(|k| k.1).sum();
            let py = y.get(parent).copied().unwrap_or(0.0);
            if total > py + Y_TOL {
                return Err(ProbingError::InvalidY {
                    prefix: parent.clone(),
                    detail: format!("extensions sum to {total} > {py}"),
                });
            }
        }
        Ok(VertexRound { y, children })
    }

    pub fn y(&self, s: &ProbeString) -> f64 {
        self.y.get(s).copied().unwrap_or(0.0)
    }

    /// Walks down from λ, passing at each prefix with the leftover
    /// probability and otherwise extending by `e` with `y(e', e) / y(e')`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ProbeString {
        let mut cur = ProbeString::empty();
        loop {
            let Some(kids) = self.children.get(&cur) else {
                return cur;
            };
            let py = self.y(&cur);
            let x = rng.random::<f64>() * py;
            let mut acc = 0.0;
            let mut next = None;
            for &(e, v) in kids {
                acc += v;
                if x < acc {
                    next = Some(e);
                    break;
                }
            }
            match next {
                Some(e) => cur = cur.extended(e),
                None => return cur,
            }
        }
    }
}

/// One draw of VertexRound.
pub fn vertex_round<R: Rng + ?Sized>(y: &BTreeMap<ProbeString, f64>, rng: &mut R) -> Result<ProbeString, ProbingError> {
    Ok(VertexRound::new(y.clone())?.sample(rng))
}

/// The y-system of the prefix law of VertexProbe run with `masses`:
/// `y(e) = P[first |e| probes are e] / g(e_{<|e|})`, which is the total mass of
/// strings starting with `e`.
pub fn y_from_masses(masses: &[(ProbeString, f64)]) -> BTreeMap<ProbeString, f64> {
    let mut y = BTreeMap::new();
    y.insert(ProbeString::empty(), 1.0);
    for (s, m) in masses {
        for k in 1..=s.len() {
            *y.entry(s.prefix(k)).or_insert(0.0) += m;
        }
    }
    y
}

/// `P[first |e| probes of VertexProbe are e]` for every prefix `e`.
pub fn prefix_probe_law(edges: &[Edge], masses: &[(ProbeString, f64)]) -> BTreeMap<ProbeString, f64> {
    y_from_masses(masses)
        .into_iter()
        .map(|(s, y)| {
            let g = if s.is_empty() {
                1.0
            } else {
                crate::lp::g_value(edges, &s.as_slice()[..s.len() - 1])
            };
            (s, y * g)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{OnlineVertex, ProbingConstraint, StochasticGraph};
    use crate::rng;
    use crate::sampling::sample_edge_states;

    fn ps(v: &[usize]) -> ProbeString {
        v.into()
    }

    #[test]
    fn distribution_must_sum_to_one() {
        assert!(matches!(
            StringDistribution::new(vec![(ps(&[0]), 0.5)]),
            Err(ProbingError::InvalidDistribution { .. })
        ));
        assert!(StringDistribution::new(vec![(ps(&[0]), 0.5), (ps(&[]), 0.5 + 5e-10)]).is_ok());
    }

    #[test]
    fn lambda_probes_nothing() {
        let g = StochasticGraph::with_offline_count(
            1,
            vec![OnlineVertex::new("v", vec![Edge::new(0, 1.0, 1.0)], ProbingConstraint::patience(1))],
        );
        let states = sample_edge_states(&g, 0, 0);
        let mut p = Prober::new(&states);
        let ev = vertex_probe(0, &StringDistribution::point(ps(&[])), &mut p, &mut rng::seeded(0)).unwrap();
        assert_eq!(ev.edge, None);
        assert!(ev.probes.is_empty());
        let ev = vertex_probe(0, &StringDistribution::point(ps(&[0])), &mut p, &mut rng::seeded(0));
        assert_eq!(ev.unwrap().edge, Some(0));
    }

    #[test]
    fn commit_frequencies_match_induced_edge_variables() {
        let g = StochasticGraph::with_offline_count(
            2,
            vec![OnlineVertex::new(
                "v",
                vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.5)],
                ProbingConstraint::patience(2),
            )],
        );
        let dist = StringDistribution::point(ps(&[0, 1]));
        let trials = 100_000u64;
        let mut hits = [0u32; 2];
        let mut r = rng::seeded(1);
        for t in 0..trials {
            let states = sample_edge_states(&g, 1, t);
            let mut p = Prober::new(&states);
            if let Some(k) = vertex_probe(0, &dist, &mut p, &mut r).unwrap().edge {
                hits[k] += 1;
            }
        }
        for (k, target) in [0.5, 0.25].into_iter().enumerate() {
            let sigma = (trials as f64 * target * (1.0 - target)).sqrt();
            assert!((hits[k] as f64 - target * trials as f64).abs() <= 3.0 * sigma);
        }
    }

    #[test]
    fn forced_chain_and_invalid_systems() {
        let mut y = BTreeMap::new();
        y.insert(ps(&[]), 1.0);
        y.insert(ps(&[0]), 1.0);
        let r = VertexRound::new(y.clone()).unwrap();
        let mut g = rng::seeded(2);
        for _ in 0..100 {
            assert_eq!(r.sample(&mut g), ps(&[0]));
        }
        y.insert(ps(&[1]), 0.1);
        match VertexRound::new(y) {
            Err(ProbingError::InvalidY { prefix, .. }) => assert_eq!(prefix, ps(&[])),
            other => panic!("{other:?}"),
        }
        let mut bad = BTreeMap::new();
        bad.insert(ps(&[]), 0.9);
        assert!(VertexRound::new(bad).is_err());
    }

    #[test]
    fn y_from_masses_satisfies_prefix_condition() {
        let masses = vec![(ps(&[0, 1]), 0.4), (ps(&[0]), 0.2), (ps(&[1, 0]), 0.3), (ps(&[]), 0.1)];
        let y = y_from_masses(&masses);
        assert!((y[&ps(&[0])] - 0.6).abs() < 1e-15);
        assert!((y[&ps(&[1])] - 0.3).abs() < 1e-15);
        VertexRound::new(y).unwrap();
        let edges = vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.25)];
        let law = prefix_probe_law(&edges, &masses);
        assert!((law[&ps(&[0, 1])] - 0.2).abs() < 1e-15);
        assert!((law[&ps(&[1, 0])] - 0.225).abs() < 1e-15);
    }
}

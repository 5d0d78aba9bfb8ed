//! Per-trial randomness: arrival types, edge states and the probe accessor.
//!
//! Edge states are drawn up front from the trial's edge-state substream, one
//! Bernoulli per (arrival, local edge) in index order, so the realised states
//! do not depend on which edges an algorithm decides to look at.

use rand::Rng;
use thiserror::Error;

use crate::graph::{KnownIdInput, OnlineVertex, StochasticGraph};
use crate::rng::{trial_rng, Substream};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProbeError {
    #[error("edge {edge} of arrival {arrival} probed twice in one trial")]
    DoubleProbe { arrival: usize, edge: usize },
}

/// Draws the type of every arrival from its row.
pub fn sample_types<R: Rng + ?Sized>(input: &KnownIdInput, rng: &mut R) -> Vec<usize> {
    input
        .distributions
        .iter()
        .map(|row| {
            let x: f64 = rng.random();
            let mut acc = 0.0;
            for &(b, r) in row {
                acc += r;
                if x < acc {
                    return b;
                }
            }
            // rounding slack at the top of the row
            row.last().map(|&(b, _)| b).unwrap_or(0)
        })
        .collect()
}

/// A realised graph `G` together with the type of each arrival.
pub fn sample_instantiation(input: &KnownIdInput, seed: u64, trial: u64) -> (StochasticGraph, Vec<usize>) {
    let mut rng = trial_rng(seed, Substream::Instantiation, trial);
    let types = sample_types(input, &mut rng);
    let online = types
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let t = &input.type_graph.online[b];
            OnlineVertex::new(format!("v{i}:{}", t.id), t.edges.clone(), t.constraint.clone())
        })
        .collect();
    (StochasticGraph::new(input.type_graph.offline.clone(), online), types)
}

/// Hidden states `st(e)` of every edge of every arrival.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStates {
    states: Vec<Vec<bool>>,
}

impl EdgeStates {
    /// Draws states for arrivals whose edge lists are given by `edges_of`.
    pub fn draw<'a, R, I>(edges_of: I, rng: &mut R) -> Self
    where
        R: Rng + ?Sized,
        I: IntoIterator<Item = &'a [crate::graph::Edge]>,
    {
        let states = edges_of
            .into_iter()
            .map(|edges| edges.iter().map(|e| rng.random::<f64>() < e.prob).collect())
            .collect();
        EdgeStates { states }
    }

    pub fn get(&self, arrival: usize, edge: usize) -> bool {
        self.states[arrival][edge]
    }

    pub fn arrivals(&self) -> usize {
        self.states.len()
    }
}

/// Independent edge states of `g` for one trial.
pub fn sample_edge_states(g: &StochasticGraph, seed: u64, trial: u64) -> EdgeStates {
    let mut rng = trial_rng(seed, Substream::EdgeStates, trial);
    EdgeStates::draw(g.online.iter().map(|v| v.edges.as_slice()), &mut rng)
}

/// Reveals edge states on demand and records every probe.
#[derive(Debug)]
pub struct Prober<'a> {
    states: &'a EdgeStates,
    probed: Vec<Vec<bool>>,
    reveals: usize,
}

impl<'a> Prober<'a> {
    pub fn new(states: &'a EdgeStates) -> Self {
        Prober {
            probed: states.states.iter().map(|s| vec![false; s.len()]).collect(),
            states,
            reveals: 0,
        }
    }

    pub fn probe(&mut self, arrival: usize, edge: usize) -> Result<bool, ProbeError> {
        let seen = &mut self.probed[arrival][edge];
        if *seen {
            return Err(ProbeError::DoubleProbe { arrival, edge });
        }
        *seen = true;
        self.reveals += 1;
        Ok(self.states.get(arrival, edge))
    }

    pub fn reveals(&self) -> usize {
        self.reveals
    }

    pub fn was_probed(&self, arrival: usize, edge: usize) -> bool {
        self.probed[arrival][edge]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, ProbingConstraint};

    fn two_types() -> KnownIdInput {
        let g = StochasticGraph::with_offline_count(
            1,
            vec![
                OnlineVertex::new("a", vec![Edge::new(0, 1.0, 0.5)], ProbingConstraint::patience(1)),
                OnlineVertex::new("b", vec![Edge::new(0, 2.0, 0.5)], ProbingConstraint::patience(1)),
            ],
        );
        KnownIdInput::iid(g, 3, vec![(0, 0.3), (1, 0.7)])
    }

    #[test]
    fn point_masses_reproduce_the_graph() {
        let g = two_types().type_graph;
        let input = KnownIdInput::from_known_graph(g.clone());
        let (h, types) = sample_instantiation(&input, 3, 0);
        assert_eq!(types, vec![0, 1]);
        for (a, b) in g.online.iter().zip(&h.online) {
            assert_eq!(a.edges, b.edges);
        }
    }

    #[test]
    fn instantiation_is_deterministic() {
        let input = two_types();
        for t in 0..20 {
            let (_, a) = sample_instantiation(&input, 9, t);
            let (_, b) = sample_instantiation(&input, 9, t);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn type_frequencies_concentrate() {
        let g = two_types().type_graph;
        let n = 100_000;
        let input = KnownIdInput::iid(g, n, vec![(0, 0.3), (1, 0.7)]);
        let (_, types) = sample_instantiation(&input, 1, 0);
        let ones = types.iter().filter(|&&b| b == 1).count() as f64;
        let sigma = (n as f64 * 0.3 * 0.7).sqrt();
        assert!((ones - 0.7 * n as f64).abs() <= 3.0 * sigma, "{ones}");
    }

    #[test]
    fn degenerate_probabilities() {
        let g = |p: f64| {
            StochasticGraph::with_offline_count(
                3,
                vec![OnlineVertex::new(
                    "v",
                    (0..3).map(|u| Edge::new(u, 1.0, p)).collect(),
                    ProbingConstraint::unbounded(),
                )],
            )
        };
        let zero = sample_edge_states(&g(0.0), 4, 0);
        let one = sample_edge_states(&g(1.0), 4, 0);
        for k in 0..3 {
            assert!(!zero.get(0, k));
            assert!(one.get(0, k));
        }
    }

    #[test]
    fn activation_frequency_concentrates() {
        let g = StochasticGraph::with_offline_count(
            1,
            vec![OnlineVertex::new("v", vec![Edge::new(0, 1.0, 0.5)], ProbingConstraint::patience(1))],
        );
        let trials = 100_000u64;
        let active = (0..trials).filter(|&t| sample_edge_states(&g, 2, t).get(0, 0)).count() as f64;
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((active - 0.5 * trials as f64).abs() <= 3.0 * sigma);
    }

    #[test]
    fn double_probe_is_an_error() {
        let (g, _) = sample_instantiation(&two_types(), 0, 0);
        let states = sample_edge_states(&g, 0, 0);
        let mut p = Prober::new(&states);
        p.probe(0, 0).unwrap();
        assert_eq!(p.probe(0, 0), Err(ProbeError::DoubleProbe { arrival: 0, edge: 0 }));
        assert_eq!(p.reveals(), 1);
    }
}

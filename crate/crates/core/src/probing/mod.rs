//! Online probing algorithms under the probe-commit discipline.
//!
//! Every algorithm here is driven by an optimal configuration LP solution:
//! each arrival runs [`vertex_probe`] with the LP's string distribution for
//! its (arrival, type) pair and commits to the first active edge it finds.
//! What happens to the commitment depends on the algorithm:
//!
//! * greedy keeps it whenever the offline endpoint is free;
//! * the OCRS variant keeps it with `q_{u,t} = 1/(2 − Σ_{s<t} z_{u,s})`;
//! * the RCRS variant keeps it with `exp(−Y_t z_{u,t})` where `Y_t` is the
//!   arrival time.

mod crs;
mod online;
mod vertex;

use thiserror::Error;

pub use crs::{ocrs_accept_prob, ocrs_exact_selectability, rcrs_accept_prob, EXACT_MAX_K};
pub use online::{
    exact_value, exact_value_random_order, run_greedy, run_ocrs_matching, run_rcrs_matching,
    run_relaxed, run_trial, worst_found_order, Algorithm, ProbingPlan, TrialOutcome,
};
pub use vertex::{
    prefix_probe_law, vertex_probe, vertex_round, y_from_masses, StringDistribution, VertexRound,
    MASS_TOL,
};

use crate::graph::{GraphError, KnownIdInput, ProbeString};
use crate::sampling::{EdgeStates, ProbeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbingError {
    #[error("string distribution sums to {sum}, not 1")]
    InvalidDistribution { sum: f64 },
    #[error("invalid y-system at prefix {prefix}: {detail}")]
    InvalidY { prefix: ProbeString, detail: String },
    #[error("fractional point has total {total} > 1")]
    InfeasiblePoint { total: f64 },
    #[error("size {size} exceeds the limit {max}")]
    TooLarge { size: usize, max: usize },
    #[error("{0}")]
    Plan(String),
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What one arrival did: the probes it spent and the edge it committed to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitEvent {
    pub arrival: usize,
    /// Local edge index of the committed edge.
    pub edge: Option<usize>,
    pub probes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatchedEdge {
    pub arrival: usize,
    pub edge: usize,
    pub offline: usize,
    pub weight: f64,
}

/// A matching between offline vertices and arrivals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matching {
    pub pairs: Vec<MatchedEdge>,
    offline_to: Vec<Option<usize>>,
    online_to: Vec<Option<usize>>,
}

impl Matching {
    pub fn new(offline: usize, online: usize) -> Self {
        Matching {
            pairs: Vec::new(),
            offline_to: vec![None; offline],
            online_to: vec![None; online],
        }
    }

    pub fn offline_free(&self, u: usize) -> bool {
        self.offline_to[u].is_none()
    }

    pub fn partner_of_offline(&self, u: usize) -> Option<usize> {
        self.offline_to[u]
    }

    pub fn partner_of_online(&self, i: usize) -> Option<usize> {
        self.online_to[i]
    }

    /// Adds `(u, arrival)`; panics if either side is already matched.
    pub fn add(&mut self, e: MatchedEdge) {
        assert!(self.offline_to[e.offline].is_none() && self.online_to[e.arrival].is_none());
        self.offline_to[e.offline] = Some(e.arrival);
        self.online_to[e.arrival] = Some(e.offline);
        self.pairs.push(e);
    }

    pub fn weight(&self) -> f64 {
        self.pairs.iter().map(|p| p.weight).sum()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks the probe-commit record of a trial: every probe list is a
    /// member of its constraint without repeats, a committed edge is the
    /// first active probe and ends the list, and every matched edge was
    /// committed to and is active.
    pub fn audit(
        &self,
        input: &KnownIdInput,
        types: &[usize],
        events: &[CommitEvent],
        states: &EdgeStates,
    ) -> Result<(), String> {
        for ev in events {
            let v = &input.type_graph.online[types[ev.arrival]];
            match v.admits(&ev.probes) {
                Ok(true) => {}
                Ok(false) => return Err(format!("arrival {} probed {:?} outside its constraint", ev.arrival, ev.probes)),
                Err(e) => return Err(format!("arrival {}: {e}", ev.arrival)),
            }
            let first_active = ev.probes.iter().position(|&k| states.get(ev.arrival, k));
            match (ev.edge, first_active) {
                (None, None) => {}
                (Some(k), Some(pos)) if ev.probes[pos] == k && pos + 1 == ev.probes.len() => {}
                _ => return Err(format!("arrival {} did not commit to its first active probe", ev.arrival)),
            }
        }
        for p in &self.pairs {
            let committed = events.iter().any(|ev| ev.arrival == p.arrival && ev.edge == Some(p.edge));
            if !committed || !states.get(p.arrival, p.edge) {
                return Err(format!("matched edge {} of arrival {} was not an active commitment", p.edge, p.arrival));
            }
            let e = &input.type_graph.online[types[p.arrival]].edges[p.edge];
            if e.offline != p.offline {
                return Err(format!("matched edge {} of arrival {} has the wrong endpoint", p.edge, p.arrival));
            }
        }
        Ok(())
    }
}

//! Greedy, OCRS and RCRS matching algorithms, their exact evaluators, and the
//! worst-found adversarial order.
//!
//! A known stochastic graph is handled as the known i.d. input whose arrival
//! `i` is vertex `i` with probability one.

use itertools::Itertools;
use rand::Rng;

use super::crs::{ocrs_accept_prob, rcrs_accept_prob};
use super::vertex::{vertex_probe, StringDistribution};
use super::{CommitEvent, MatchedEdge, Matching, ProbingError};
use crate::graph::{ArrivalModel, ArrivalSchedule, KnownIdInput, StochasticGraph};
use crate::lp::ConfigSolution;
use crate::rng::{trial_rng, Substream};
use crate::sampling::{sample_types, EdgeStates, Prober};

/// Relative slack accepted between a slot's LP mass and its row value.
const SLOT_MASS_TOL: f64 = 1e-7;
/// Largest `n` for which [`worst_found_order`] searches every permutation.
pub const EXHAUSTIVE_ORDER_MAX: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Greedy,
    Ocrs,
    Rcrs,
}

/// Everything an algorithm needs from the LP, indexed for fast trials.
#[derive(Clone, Debug)]
pub struct ProbingPlan {
    pub input: KnownIdInput,
    pub lpopt: f64,
    /// `dists[i]`: `(type, distribution x_i(·||b)/r_i(b))` pairs.
    dists: Vec<Vec<(usize, StringDistribution)>>,
    /// `z[u][i]`: probability arrival `i` commits to `u`.
    pub z: Vec<Vec<f64>>,
    /// `contrib[u][i]`: expected weight of arrival `i` committing to `u`.
    pub contrib: Vec<Vec<f64>>,
}

impl ProbingPlan {
    pub fn new(input: &KnownIdInput, sol: &ConfigSolution) -> Result<Self, ProbingError> {
        let n = input.arrivals();
        let g = &input.type_graph;
        if sol.num_arrivals != n || sol.num_offline != g.offline_count() {
            return Err(ProbingError::Plan("solution does not belong to this input".into()));
        }
        let mut dists: Vec<Vec<(usize, StringDistribution)>> = vec![Vec::new(); n];
        for (slot, cols) in sol.slot_columns().into_iter().enumerate() {
            let s = sol.slots[slot];
            let total: f64 = cols.iter().map(|c| c.1).sum();
            if (total - s.mass).abs() > SLOT_MASS_TOL * s.mass.max(1.0) {
                return Err(ProbingError::InvalidDistribution { sum: total / s.mass });
            }
            let entries = cols.into_iter().map(|(e, m)| (e, m / total)).collect();
            dists[s.arrival].push((s.type_node, StringDistribution::new(entries)?));
        }
        for (i, row) in input.distributions.iter().enumerate() {
            for &(b, _) in row {
                if !dists[i].iter().any(|d| d.0 == b) {
                    return Err(ProbingError::Plan(format!("solution has no slot for arrival {i} type {b}")));
                }
            }
        }
        let z = sol.commit_probabilities(g);
        let mut contrib = vec![vec![0.0; n]; g.offline_count()];
        for (slot, s) in sol.slots.iter().enumerate() {
            for (k, e) in g.online[s.type_node].edges.iter().enumerate() {
                contrib[e.offline][s.arrival] += e.weight * e.prob * sol.edge_vars[slot][k];
            }
        }
        Ok(ProbingPlan {
            input: input.clone(),
            lpopt: sol.objective,
            dists,
            z,
            contrib,
        })
    }

    pub fn for_graph(g: &StochasticGraph, sol: &ConfigSolution) -> Result<Self, ProbingError> {
        Self::new(&KnownIdInput::from_known_graph(g.clone()), sol)
    }

    pub fn arrivals(&self) -> usize {
        self.input.arrivals()
    }

    pub fn offline(&self) -> usize {
        self.input.type_graph.offline_count()
    }

    pub fn distribution(&self, arrival: usize, type_node: usize) -> Option<&StringDistribution> {
        self.dists[arrival].iter().find(|d| d.0 == type_node).map(|d| &d.1)
    }
}

/// Full record of one trial.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub types: Vec<usize>,
    pub schedule: ArrivalSchedule,
    pub events: Vec<CommitEvent>,
    pub states: EdgeStates,
    pub matching: Matching,
}

impl TrialOutcome {
    pub fn weight(&self) -> f64 {
        self.matching.weight()
    }
}

fn draw_types_and_states(plan: &ProbingPlan, seed: u64, trial: u64) -> (Vec<usize>, EdgeStates) {
    let types = sample_types(&plan.input, &mut trial_rng(seed, Substream::Instantiation, trial));
    let g = &plan.input.type_graph;
    let states = EdgeStates::draw(
        types.iter().map(|&b| g.online[b].edges.as_slice()),
        &mut trial_rng(seed, Substream::EdgeStates, trial),
    );
    (types, states)
}

/// Runs `alg` for trial `trial` of an experiment with seed `seed`.
///
/// RCRS draws its own arrival times and rejects adversarial orders.
pub fn run_trial(
    plan: &ProbingPlan,
    alg: Algorithm,
    arrivals: &ArrivalModel,
    seed: u64,
    trial: u64,
) -> Result<TrialOutcome, ProbingError> {
    let n = plan.arrivals();
    let (types, states) = draw_types_and_states(plan, seed, trial);
    let mut arr = trial_rng(seed, Substream::Arrivals, trial);
    let schedule = match (alg, arrivals) {
        (Algorithm::Rcrs, ArrivalModel::Adversarial(_)) => {
            return Err(ProbingError::Plan("the random-order scheme needs random arrival times".into()))
        }
        (Algorithm::Rcrs, _) => ArrivalModel::RandomArrivalTimes.schedule(n, &mut arr)?,
        _ => arrivals.schedule(n, &mut arr)?,
    };
    let mut dec = trial_rng(seed, Substream::Decisions, trial);
    let g = &plan.input.type_graph;
    let mut matching = Matching::new(g.offline_count(), n);
    let mut prefix = vec![0.0; g.offline_count()];
    let mut events = Vec::with_capacity(n);
    let mut prober = Prober::new(&states);
    for &i in &schedule.order {
        let b = types[i];
        let dist = plan
            .distribution(i, b)
            .ok_or_else(|| ProbingError::Plan(format!("no distribution for arrival {i} type {b}")))?;
        let ev = vertex_probe(i, dist, &mut prober, &mut dec)?;
        if let Some(k) = ev.edge {
            let e = &g.online[b].edges[k];
            let u = e.offline;
            if matching.offline_free(u) {
                let keep = match alg {
                    Algorithm::Greedy => true,
                    Algorithm::Ocrs => dec.random::<f64>() < ocrs_accept_prob(prefix[u])?,
                    Algorithm::Rcrs => {
                        let y = schedule.times.as_ref().map_or(0.0, |t| t[i]);
                        dec.random::<f64>() < rcrs_accept_prob(y, plan.z[u][i])
                    }
                };
                if keep {
                    matching.add(MatchedEdge {
                        arrival: i,
                        edge: k,
                        offline: u,
                        weight: e.weight,
                    });
                }
            }
        }
        for (u, p) in prefix.iter_mut().enumerate() {
            *p += plan.z[u][i];
        }
        events.push(ev);
    }
    Ok(TrialOutcome {
        types,
        schedule,
        events,
        states,
        matching,
    })
}

pub fn run_greedy(plan: &ProbingPlan, arrivals: &ArrivalModel, seed: u64, trial: u64) -> Result<TrialOutcome, ProbingError> {
    run_trial(plan, Algorithm::Greedy, arrivals, seed, trial)
}

pub fn run_ocrs_matching(plan: &ProbingPlan, order: &[usize], seed: u64, trial: u64) -> Result<TrialOutcome, ProbingError> {
    run_trial(plan, Algorithm::Ocrs, &ArrivalModel::Adversarial(order.to_vec()), seed, trial)
}

pub fn run_rcrs_matching(plan: &ProbingPlan, seed: u64, trial: u64) -> Result<TrialOutcome, ProbingError> {
    run_trial(plan, Algorithm::Rcrs, &ArrivalModel::RandomArrivalTimes, seed, trial)
}

/// The relaxed algorithm: every arrival runs VertexProbe and keeps its
/// commitment regardless of contention. Returns the one-sided weight and the
/// number of arrivals matched to each offline vertex.
pub fn run_relaxed(plan: &ProbingPlan, seed: u64, trial: u64) -> Result<(f64, Vec<usize>), ProbingError> {
    let (types, states) = draw_types_and_states(plan, seed, trial);
    let mut dec = trial_rng(seed, Substream::Decisions, trial);
    let mut prober = Prober::new(&states);
    let g = &plan.input.type_graph;
    let mut counts = vec![0usize; g.offline_count()];
    let mut weight = 0.0;
    for (i, &b) in types.iter().enumerate() {
        let dist = plan
            .distribution(i, b)
            .ok_or_else(|| ProbingError::Plan(format!("no distribution for arrival {i} type {b}")))?;
        if let Some(k) = vertex_probe(i, dist, &mut prober, &mut dec)?.edge {
            let e = &g.online[b].edges[k];
            counts[e.offline] += 1;
            weight += e.weight;
        }
    }
    Ok((weight, counts))
}

/// Exact expected weight of greedy or OCRS under a fixed `order`, or of RCRS.
///
/// For a fixed offline vertex the commitments of different arrivals are
/// independent, so `u` is still free at step `t` with probability
/// `Π_{s<t} (1 − z_{u,s} q_{u,s})`.
pub fn exact_value(plan: &ProbingPlan, alg: Algorithm, order: &[usize]) -> Result<f64, ProbingError> {
    let mut total = 0.0;
    for u in 0..plan.offline() {
        let (z, c) = (&plan.z[u], &plan.contrib[u]);
        match alg {
            Algorithm::Rcrs => total += rcrs_factor(z.iter().sum()) * c.iter().sum::<f64>(),
            _ => {
                let mut free = 1.0;
                let mut prefix = 0.0;
                for &i in order {
                    let q = match alg {
                        Algorithm::Greedy => 1.0,
                        _ => ocrs_accept_prob(prefix)?,
                    };
                    total += c[i] * q * free;
                    free *= 1.0 - z[i] * q;
                    prefix += z[i];
                }
            }
        }
    }
    Ok(total)
}

/// `∫_0^1 exp(−y Z) dy`: the chance an RCRS commitment is kept.
fn rcrs_factor(total: f64) -> f64 {
    if total < 1e-12 {
        1.0 - total / 2.0
    } else {
        -(-total).exp_m1() / total
    }
}

/// Exact expected weight under a uniformly random order.
///
/// Greedy: arrival `i` finds `u` free with probability
/// `∫_0^1 Π_{s≠i} (1 − y z_{u,s}) dy`, integrated exactly as a polynomial.
/// OCRS keeps every commitment with overall probability one half whatever the
/// order, so its value is the same as for any fixed order.
pub fn exact_value_random_order(plan: &ProbingPlan, alg: Algorithm) -> Result<f64, ProbingError> {
    let n = plan.arrivals();
    match alg {
        Algorithm::Greedy => {
            let mut total = 0.0;
            for u in 0..plan.offline() {
                for i in 0..n {
                    if plan.contrib[u][i] == 0.0 {
                        continue;
                    }
                    let mut poly = vec![1.0];
                    for s in (0..n).filter(|&s| s != i) {
                        let z = plan.z[u][s];
                        let mut next = vec![0.0; poly.len() + 1];
                        for (k, a) in poly.iter().enumerate() {
                            next[k] += a;
                            next[k + 1] -= a * z;
                        }
                        poly = next;
                    }
                    let integral: f64 = poly.iter().enumerate().map(|(k, a)| a / (k + 1) as f64).sum();
                    total += plan.contrib[u][i] * integral;
                }
            }
            Ok(total)
        }
        _ => exact_value(plan, alg, &(0..n).collect::<Vec<_>>()),
    }
}

/// Order minimising `eval`: every permutation for `n ≤ 7`, otherwise
/// best-improvement pair swaps from the identity. Ties keep the earliest
/// order found.
pub fn worst_found_order(n: usize, mut eval: impl FnMut(&[usize]) -> f64) -> Vec<usize> {
    let identity: Vec<usize> = (0..n).collect();
    if n <= EXHAUSTIVE_ORDER_MAX {
        let mut best = identity.clone();
        let mut best_val = eval(&identity);
        for p in identity.iter().copied().permutations(n) {
            let v = eval(&p);
            if v < best_val - 1e-15 {
                best_val = v;
                best = p;
            }
        }
        return best;
    }
    let mut cur = identity;
    let mut cur_val = eval(&cur);
    for _ in 0..1000 {
        let mut step = None;
        for a in 0..n {
            for b in a + 1..n {
                cur.swap(a, b);
                let v = eval(&cur);
                cur.swap(a, b);
                if v < cur_val - 1e-15 && step.is_none_or(|(_, _, bv)| v < bv) {
                    step = Some((a, b, v));
                }
            }
        }
        match step {
            Some((a, b, v)) => {
                cur.swap(a, b);
                cur_val = v;
            }
            None => break,
        }
    }
    cur
}

//! Ground truth for small instances: the adaptive and non-adaptive offline
//! benchmarks by exhaustive search, the LP-valued relaxed benchmark, and the
//! Erdős–Rényi instance separating adaptive from non-adaptive probing.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::graph::{Edge, GraphError, OnlineVertex, ProbingConstraint, StochasticGraph};
use crate::lp::{solve_lp_config, LpError, Method};
use crate::rng::{trial_rng, Substream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchmarkError {
    #[error("search space of about {estimate} states exceeds the limit {limit}")]
    TooLarge { estimate: f64, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Memo entries for the adaptive search.
    pub max_states: usize,
    /// Probe sequences visited by the non-adaptive search.
    pub max_nodes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: 5_000_000,
            max_nodes: 20_000_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Packs the adaptive search state into one integer: the available offline
/// set in the low bits, then per online vertex its probed edge set and a
/// "done" bit.
struct Packing {
    shift: Vec<u32>,
    offline_bits: u32,
}

impl Packing {
    fn new(g: &StochasticGraph) -> Option<Self> {
        let mut shift = Vec::with_capacity(g.online_count());
        let mut at = g.offline_count() as u32;
        for v in &g.online {
            shift.push(at);
            at += v.degree() as u32 + 1;
        }
        (at <= 128).then_some(Packing {
            shift,
            offline_bits: g.offline_count() as u32,
        })
    }
}

struct Adaptive<'a> {
    g: &'a StochasticGraph,
    pack: Packing,
    memo: HashMap<u128, f64>,
    limit: usize,
}

impl Adaptive<'_> {
    fn value(&mut self, key: u128) -> Result<f64, BenchmarkError> {
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let g = self.g;
        let avail = key & ((1u128 << self.pack.offline_bits) - 1);
        let mut best: f64 = 0.0;
        for (v, ov) in g.online.iter().enumerate() {
            let sh = self.pack.shift[v];
            let deg = ov.degree() as u32;
            let local = (key >> sh) & ((1u128 << (deg + 1)) - 1);
            if local >> deg & 1 == 1 {
                continue;
            }
            let probed: Vec<usize> = (0..ov.degree()).filter(|&k| local >> k & 1 == 1).collect();
            for (k, e) in ov.edges.iter().enumerate() {
                if local >> k & 1 == 1 || e.prob <= 0.0 || avail >> e.offline & 1 == 0 {
                    continue;
                }
                let mut next = probed.clone();
                next.push(k);
                if !ov.constraint.contains_unchecked(&next)? {
                    continue;
                }
                let hit = (key & !(1u128 << e.offline)) | (1u128 << (sh + deg));
                let miss = key | (1u128 << (sh + k as u32));
                let val = e.prob * (e.weight + self.value(hit)?)
                    + if e.prob < 1.0 { (1.0 - e.prob) * self.value(miss)? } else { 0.0 };
                best = best.max(val);
            }
        }
        if self.memo.len() >= self.limit {
            return Err(BenchmarkError::TooLarge {
                estimate: self.memo.len() as f64,
                limit: self.limit,
            });
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

/// Upper estimate of reachable adaptive states.
pub fn adaptive_state_estimate(g: &StochasticGraph) -> f64 {
    let mut est = 2f64.powi(g.offline_count() as i32);
    for v in &g.online {
        let l = v.constraint.length_bound(v.degree());
        let sets: f64 = (0..=l).map(|k| binomial(v.degree(), k)).sum();
        est *= sets + 1.0;
    }
    est
}

/// Exact optimum over adaptive probe-commit policies that may interleave
/// online vertices arbitrarily and stop at any time.
pub fn adaptive_opt_bruteforce(g: &StochasticGraph, limits: Limits) -> Result<f64, BenchmarkError> {
    let estimate = adaptive_state_estimate(g);
    let pack = match Packing::new(g) {
        Some(p) if estimate <= limits.max_states as f64 => p,
        _ => {
            return Err(BenchmarkError::TooLarge {
                estimate,
                limit: limits.max_states,
            })
        }
    };
    let mut search = Adaptive {
        g,
        pack,
        memo: HashMap::new(),
        limit: limits.max_states,
    };
    let start = (1u128 << g.offline_count()) - 1;
    search.value(start)
}

struct NonAdaptive<'a> {
    g: &'a StochasticGraph,
    /// `(online vertex, local edge)` for every edge with `p > 0`.
    edges: Vec<(usize, usize)>,
    best: f64,
    nodes: usize,
    limit: usize,
}

impl NonAdaptive<'_> {
    fn independent(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let ea = &self.g.online[a.0].edges[a.1];
        let eb = &self.g.online[b.0].edges[b.1];
        a.0 != b.0 && ea.offline != eb.offline
    }

    /// `dist` maps (available offline set, matched online set) to probability.
    fn dfs(
        &mut self,
        dist: &HashMap<(u64, u64), f64>,
        gained: f64,
        seqs: &mut Vec<Vec<usize>>,
        last: Option<usize>,
    ) -> Result<(), BenchmarkError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(BenchmarkError::TooLarge {
                estimate: self.nodes as f64,
                limit: self.limit,
            });
        }
        self.best = self.best.max(gained);
        for idx in 0..self.edges.len() {
            let (v, k) = self.edges[idx];
            // commuting neighbours are only tried in increasing index order
            if let Some(l) = last {
                if idx < l && self.independent(self.edges[l], (v, k)) {
                    continue;
                }
            }
            if seqs[v].contains(&k) {
                continue;
            }
            seqs[v].push(k);
            let ok = self.g.online[v].constraint.contains_unchecked(&seqs[v])?;
            if ok {
                let e = &self.g.online[v].edges[k];
                let mut next: HashMap<(u64, u64), f64> = HashMap::with_capacity(dist.len() * 2);
                let mut gain = 0.0;
                for (&(avail, matched), &pr) in dist {
                    if avail >> e.offline & 1 == 1 && matched >> v & 1 == 0 {
                        gain += pr * e.prob * e.weight;
                        *next.entry((avail & !(1 << e.offline), matched | (1 << v))).or_insert(0.0) += pr * e.prob;
                        if e.prob < 1.0 {
                            *next.entry((avail, matched)).or_insert(0.0) += pr * (1.0 - e.prob);
                        }
                    } else {
                        *next.entry((avail, matched)).or_insert(0.0) += pr;
                    }
                }
                self.dfs(&next, gained + gain, seqs, Some(idx))?;
            }
            seqs[v].pop();
        }
        Ok(())
    }
}

/// Exact optimum over deterministic non-adaptive plans: a fixed global probe
/// sequence, skipping probes whose endpoints are already matched, in which
/// every online vertex's subsequence lies in its constraint.
pub fn nonadaptive_opt_bruteforce(g: &StochasticGraph, limits: Limits) -> Result<f64, BenchmarkError> {
    if g.offline_count() > 64 || g.online_count() > 64 {
        return Err(BenchmarkError::TooLarge {
            estimate: f64::INFINITY,
            limit: limits.max_nodes,
        });
    }
    let edges: Vec<(usize, usize)> = g
        .edge_refs()
        .filter(|(_, _, e)| e.prob > 0.0)
        .map(|(v, k, _)| (v, k))
        .collect();
    let mut search = NonAdaptive {
        g,
        edges,
        best: 0.0,
        nodes: 0,
        limit: limits.max_nodes,
    };
    let full = if g.offline_count() == 64 { u64::MAX } else { (1u64 << g.offline_count()) - 1 };
    let mut dist = HashMap::new();
    dist.insert((full, 0u64), 1.0);
    let mut seqs = vec![Vec::new(); g.online_count()];
    search.dfs(&dist, 0.0, &mut seqs, None)?;
    Ok(search.best)
}

/// The relaxed benchmark, whose value is the configuration LP optimum.
pub fn relaxed_opt(g: &StochasticGraph) -> Result<f64, BenchmarkError> {
    let sol = match solve_lp_config(g, Method::Enumerate) {
        Err(LpError::Graph(GraphError::Explosion { .. })) => solve_lp_config(g, Method::ColumnGeneration)?,
        other => other?,
    };
    Ok(sol.objective)
}

/// Complete `s × n` bipartite graph with unit weights, edge probability `p`
/// and unit patience. Returns warnings when `s > p n` or `p ≥ n^{-1/2}`.
pub fn er_instance(n: usize, p: f64, s: usize) -> (StochasticGraph, Vec<String>) {
    let mut warnings = Vec::new();
    if s as f64 > p * n as f64 {
        warnings.push(format!("s = {s} exceeds p·n = {}", p * n as f64));
    }
    if p >= (n as f64).powf(-0.5) {
        warnings.push(format!("p = {p} is not below n^(-1/2) = {}", (n as f64).powf(-0.5)));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    let online = (0..n)
        .map(|j| {
            OnlineVertex::new(
                format!("v{j}"),
                (0..s).map(|u| Edge::new(u, 1.0, p)).collect(),
                ProbingConstraint::patience(1),
            )
        })
        .collect();
    (StochasticGraph::with_offline_count(s, online), warnings)
}

/// Matching size of the adaptive greedy policy on the ER instance: every
/// online vertex probes its edge to the lowest-indexed unmatched offline
/// vertex. One value per trial.
pub fn er_adaptive_greedy(n: usize, p: f64, s: usize, seed: u64, trials: u64) -> Vec<f64> {
    (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, Substream::EdgeStates, t);
            let mut matched = 0usize;
            for _ in 0..n {
                if matched == s {
                    break;
                }
                if rng.random::<f64>() < p {
                    matched += 1;
                }
            }
            matched as f64
        })
        .collect()
}

/// Matching size of the balanced non-adaptive plan (online vertex `j` probes
/// offline vertex `j mod s`). One value per trial.
pub fn er_balanced_nonadaptive(n: usize, p: f64, s: usize, seed: u64, trials: u64) -> Vec<f64> {
    (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, Substream::EdgeStates, t);
            let mut hit = vec![false; s];
            for j in 0..n {
                let active = rng.random::<f64>() < p;
                hit[j % s] |= active;
            }
            hit.iter().filter(|&&h| h).count() as f64
        })
        .collect()
}

/// Expected value of the balanced plan: `Σ_u 1 − (1 − p)^{n_u}`.
pub fn er_balanced_value(n: usize, p: f64, s: usize) -> f64 {
    (0..s)
        .map(|u| {
            let nu = n / s + usize::from(u < n % s);
            1.0 - (1.0 - p).powi(nu as i32)
        })
        .sum()
}

/// `E[min(Bin(n, p), s)]`, the adaptive optimum of the ER instance.
pub fn er_adaptive_value(n: usize, p: f64, s: usize) -> f64 {
    // pmf by the ratio recurrence, in log space for the first term
    let mut log_pmf = n as f64 * (1.0 - p).ln();
    let mut below = 0.0;
    let mut mass_below = 0.0;
    for k in 0..s.min(n + 1) {
        let pmf = log_pmf.exp();
        below += k as f64 * pmf;
        mass_below += pmf;
        log_pmf += ((n - k) as f64 / (k + 1) as f64).ln() + (p / (1.0 - p)).ln();
    }
    below + s as f64 * (1.0 - mass_below)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::demand_oracle;

    fn uniform_star(k: usize, c: ProbingConstraint) -> StochasticGraph {
        StochasticGraph::with_offline_count(
            k,
            vec![OnlineVertex::new("v", (0..k).map(|u| Edge::new(u, 1.0, 1.0 / k as f64)).collect(), c)],
        )
    }

    #[test]
    fn uniform_star_values() {
        let g = uniform_star(3, ProbingConstraint::patience(1));
        assert!((adaptive_opt_bruteforce(&g, Limits::default()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let g = uniform_star(4, ProbingConstraint::unbounded());
        let want = 1.0 - 0.75f64.powi(4);
        assert!((adaptive_opt_bruteforce(&g, Limits::default()).unwrap() - want).abs() < 1e-12);
        assert!((relaxed_opt(&uniform_star(2, ProbingConstraint::patience(1))).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn single_vertex_matches_demand_oracle() {
        let v = OnlineVertex::new(
            "v",
            vec![Edge::new(0, 1.0, 0.9), Edge::new(1, 2.0, 0.5), Edge::new(2, 1.5, 0.5)],
            ProbingConstraint::patience(2),
        );
        let want = demand_oracle(&v, &[0.0; 3]).unwrap().value;
        let g = StochasticGraph::with_offline_count(3, vec![v]);
        assert!((adaptive_opt_bruteforce(&g, Limits::default()).unwrap() - want).abs() < 1e-12);
        assert!((nonadaptive_opt_bruteforce(&g, Limits::default()).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn unit_star_nonadaptive() {
        let g = StochasticGraph::with_offline_count(
            1,
            (0..2)
                .map(|i| OnlineVertex::new(format!("v{i}"), vec![Edge::new(0, 1.0, 1.0)], ProbingConstraint::patience(1)))
                .collect(),
        );
        assert_eq!(nonadaptive_opt_bruteforce(&g, Limits::default()).unwrap(), 1.0);
    }

    #[test]
    fn limits_are_enforced() {
        let g = uniform_star(8, ProbingConstraint::unbounded());
        let tiny = Limits {
            max_states: 10,
            max_nodes: 10,
        };
        assert!(matches!(adaptive_opt_bruteforce(&g, tiny), Err(BenchmarkError::TooLarge { .. })));
        assert!(matches!(nonadaptive_opt_bruteforce(&g, tiny), Err(BenchmarkError::TooLarge { .. })));
    }

    #[test]
    fn er_closed_forms() {
        let (g, warnings) = er_instance(100, 0.001, 10);
        assert_eq!((g.offline_count(), g.online_count()), (10, 100));
        assert_eq!(warnings.len(), 1);
        // E[min(Bin(3, 1/2), 2)] = (3·1 + 3·2 + 1·2) / 8
        assert!((er_adaptive_value(3, 0.5, 2) - 11.0 / 8.0).abs() < 1e-12);
        assert!((er_balanced_value(4, 0.5, 2) - 2.0 * 0.75).abs() < 1e-15);
        assert!((er_balanced_value(3, 0.5, 2) - (0.75 + 0.5)).abs() < 1e-15);
    }
}

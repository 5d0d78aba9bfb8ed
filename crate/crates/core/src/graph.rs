//! Stochastic bipartite graphs, probing constraints and known i.d. inputs.
//!
//! Offline vertices are referred to by index into [`StochasticGraph::offline`].
//! Each online vertex owns its incident edges; a [`ProbeString`] is a tuple of
//! indices into that edge list. Absent edges behave as edges with `p = 0`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng;

/// Tolerance used when comparing accumulated costs against a budget.
const BUDGET_EPS: f64 = 1e-12;
/// Tolerance for distribution rows summing to one.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("probe string {0} repeats edge {1}")]
    DuplicateEdge(ProbeString, usize),
    #[error("probe string {string} references edge {edge} but the vertex has {degree} edges")]
    EdgeOutOfRange {
        string: ProbeString,
        edge: usize,
        degree: usize,
    },
    #[error(
        "constraint admits more than {cap} probe strings; use column generation instead of enumeration"
    )]
    Explosion { cap: usize },
    #[error("membership oracle failed: {0}")]
    Oracle(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// An edge incident to an online vertex (or type node).
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Index of the offline endpoint.
    pub offline: usize,
    pub weight: f64,
    pub prob: f64,
}

impl Edge {
    pub fn new(offline: usize, weight: f64, prob: f64) -> Self {
        Edge {
            offline,
            weight,
            prob,
        }
    }
}

/// Ordered tuple of distinct edge indices of one online vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbeString(Vec<usize>);

impl ProbeString {
    pub const EMPTY: ProbeString = ProbeString(Vec::new());

    /// The empty string λ.
    pub fn empty() -> Self {
        ProbeString(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// The string extended by one more edge.
    pub fn extended(&self, edge: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(edge);
        ProbeString(v)
    }

    /// First `k` characters.
    pub fn prefix(&self, k: usize) -> Self {
        ProbeString(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.contains(&edge)
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl From<Vec<usize>> for ProbeString {
    fn from(v: Vec<usize>) -> Self {
        ProbeString(v)
    }
}

impl From<&[usize]> for ProbeString {
    fn from(v: &[usize]) -> Self {
        ProbeString(v.to_vec())
    }
}

impl fmt::Display for ProbeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "λ");
        }
        write!(f, "(")?;
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

type OracleFn = dyn Fn(&[usize]) -> Result<bool, String> + Send + Sync;

/// Membership callback for constraints only available through queries.
///
/// The callback must describe a downward-closed family. A lying oracle gives
/// undefined results; [`validate_graph`] spot-checks it.
#[derive(Clone)]
pub struct MembershipOracle(Arc<OracleFn>);

impl MembershipOracle {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(&[usize]) -> Result<bool, String> + Send + Sync + 'static,
    {
        MembershipOracle(Arc::new(f))
    }

    pub fn query(&self, s: &[usize]) -> Result<bool, String> {
        (self.0)(s)
    }
}

impl fmt::Debug for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("MembershipOracle(..)")
    }
}

/// Downward-closed family `C_v` of probe strings an online vertex may use.
#[derive(Clone, Debug)]
pub enum ProbingConstraint {
    /// At most `limit` probes. `usize::MAX` means unbounded patience.
    Patience { limit: usize },
    /// Additive probe costs (one per incident edge) under a budget.
    Budget { budget: f64, costs: Vec<f64> },
    /// Finite list of member strings.
    Explicit { strings: BTreeSet<ProbeString> },
    OracleBacked(MembershipOracle),
}

impl ProbingConstraint {
    pub fn patience(limit: usize) -> Self {
        ProbingConstraint::Patience { limit }
    }

    pub fn unbounded() -> Self {
        ProbingConstraint::Patience { limit: usize::MAX }
    }

    pub fn budget(budget: f64, costs: Vec<f64>) -> Self {
        ProbingConstraint::Budget { budget, costs }
    }

    /// Explicit constraint exactly as given (no closure completion).
    pub fn explicit_raw<I, S>(strings: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<ProbeString>,
    {
        let mut set: BTreeSet<ProbeString> = strings.into_iter().map(Into::into).collect();
        set.insert(ProbeString::empty());
        ProbingConstraint::Explicit { strings: set }
    }

    /// Explicit constraint completed under substrings and permutations.
    pub fn explicit<I, S>(strings: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<ProbeString>,
    {
        let raw = Self::explicit_raw(strings);
        raw.canonicalized()
    }

    /// True when the constraint is `Patience` with a limit of at least `degree`.
    pub fn is_unbounded_for(&self, degree: usize) -> bool {
        matches!(self, ProbingConstraint::Patience { limit } if *limit >= degree)
    }

    /// For `Explicit` constraints, the closure under substrings and
    /// permutations; other kinds are returned unchanged. Logs a warning when
    /// strings had to be added.
    pub fn canonicalized(self) -> Self {
        match self {
            ProbingConstraint::Explicit { strings } => {
                let mut closed = BTreeSet::new();
                for s in &strings {
                    add_all_subsequence_permutations(s.as_slice(), &mut closed);
                }
                closed.insert(ProbeString::empty());
                if closed.len() != strings.len() {
                    log::warn!(
                        "explicit probing constraint was not downward-closed; added {} strings",
                        closed.len() - strings.len()
                    );
                }
                ProbingConstraint::Explicit { strings: closed }
            }
            other => other,
        }
    }

    /// Membership query `s ∈ C_v` for a vertex with `degree` incident edges.
    pub fn contains(&self, s: &[usize], degree: usize) -> Result<bool, GraphError> {
        check_string(s, degree)?;
        self.contains_unchecked(s)
    }

    /// Membership without validating distinctness; callers guarantee it.
    pub(crate) fn contains_unchecked(&self, s: &[usize]) -> Result<bool, GraphError> {
        if s.is_empty() {
            return Ok(true);
        }
        Ok(match self {
            ProbingConstraint::Patience { limit } => s.len() <= *limit,
            ProbingConstraint::Budget { budget, costs } => {
                let total: f64 = s.iter().map(|&e| costs.get(e).copied().unwrap_or(0.0)).sum();
                total <= budget + BUDGET_EPS * budget.abs().max(1.0)
            }
            ProbingConstraint::Explicit { strings } => strings.contains(&ProbeString::from(s)),
            ProbingConstraint::OracleBacked(o) => o.query(s).map_err(GraphError::Oracle)?,
        })
    }

    /// Upper bound on string length the constraint can admit, if known.
    pub fn length_bound(&self, degree: usize) -> usize {
        match self {
            ProbingConstraint::Patience { limit } => (*limit).min(degree),
            ProbingConstraint::Explicit { strings } => {
                strings.iter().map(ProbeString::len).max().unwrap_or(0)
            }
            _ => degree,
        }
    }
}

fn add_all_subsequence_permutations(s: &[usize], out: &mut BTreeSet<ProbeString>) {
    let k = s.len();
    for mask in 0u64..(1u64 << k) {
        let subset: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        let len = subset.len();
        for perm in itertools::Itertools::permutations(subset.into_iter(), len) {
            out.insert(ProbeString(perm));
        }
    }
}

fn check_string(s: &[usize], degree: usize) -> Result<(), GraphError> {
    for (k, &e) in s.iter().enumerate() {
        if e >= degree {
            return Err(GraphError::EdgeOutOfRange {
                string: s.into(),
                edge: e,
                degree,
            });
        }
        if s[..k].contains(&e) {
            return Err(GraphError::DuplicateEdge(s.into(), e));
        }
    }
    Ok(())
}

/// Every member of `c` over `degree` edges, depth-first in lexicographic
/// index order (λ first). Fails once more than `cap` strings would be produced.
pub fn enumerate_strings(
    c: &ProbingConstraint,
    degree: usize,
    cap: usize,
) -> Result<Vec<ProbeString>, GraphError> {
    if let ProbingConstraint::Patience { limit } = c {
        // exact count without walking the tree
        let mut total: u128 = 0;
        let mut term: u128 = 1;
        for k in 0..=(*limit).min(degree) {
            if k > 0 {
                term *= (degree - k + 1) as u128;
            }
            total += term;
            if total > cap as u128 {
                return Err(GraphError::Explosion { cap });
            }
        }
    }
    let mut out = Vec::new();
    let mut stack = vec![Vec::<usize>::new()];
    let mut used = vec![false; degree];
    enumerate_rec(c, degree, cap, &mut stack, &mut used, &mut out)?;
    Ok(out)
}

fn enumerate_rec(
    c: &ProbingConstraint,
    degree: usize,
    cap: usize,
    stack: &mut Vec<Vec<usize>>,
    used: &mut [bool],
    out: &mut Vec<ProbeString>,
) -> Result<(), GraphError> {
    let current = stack.last().cloned().unwrap_or_default();
    if out.len() >= cap {
        return Err(GraphError::Explosion { cap });
    }
    out.push(ProbeString(current.clone()));
    if current.len() >= c.length_bound(degree) {
        return Ok(());
    }
    for e in 0..degree {
        if used[e] {
            continue;
        }
        let mut next = current.clone();
        next.push(e);
        if c.contains_unchecked(&next)? {
            used[e] = true;
            stack.push(next);
            enumerate_rec(c, degree, cap, stack, used, out)?;
            stack.pop();
            used[e] = false;
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct OnlineVertex {
    pub id: String,
    pub edges: Vec<Edge>,
    pub constraint: ProbingConstraint,
}

impl OnlineVertex {
    pub fn new(id: impl Into<String>, edges: Vec<Edge>, constraint: ProbingConstraint) -> Self {
        OnlineVertex {
            id: id.into(),
            edges,
            constraint,
        }
    }

    pub fn degree(&self) -> usize {
        self.edges.len()
    }

    /// Membership for this vertex's constraint.
    pub fn admits(&self, s: &[usize]) -> Result<bool, GraphError> {
        self.constraint.contains(s, self.degree())
    }

    /// Local index of the edge to offline vertex `u`, if present.
    pub fn edge_to(&self, u: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.offline == u)
    }
}

/// Bipartite stochastic graph `G = (U, V, E)`.
#[derive(Clone, Debug, Default)]
pub struct StochasticGraph {
    pub offline: Vec<String>,
    pub online: Vec<OnlineVertex>,
}

impl StochasticGraph {
    pub fn new(offline: Vec<String>, online: Vec<OnlineVertex>) -> Self {
        StochasticGraph { offline, online }
    }

    /// Graph with offline ids `u0, u1, ...`.
    pub fn with_offline_count(count: usize, online: Vec<OnlineVertex>) -> Self {
        StochasticGraph {
            offline: (0..count).map(|i| format!("u{i}")).collect(),
            online,
        }
    }

    pub fn offline_count(&self) -> usize {
        self.offline.len()
    }

    pub fn online_count(&self) -> usize {
        self.online.len()
    }

    pub fn edge_count(&self) -> usize {
        self.online.iter().map(OnlineVertex::degree).sum()
    }

    /// `(online vertex, local edge)` pairs in vertex order.
    pub fn edge_refs(&self) -> impl Iterator<Item = (usize, usize, &Edge)> + '_ {
        self.online
            .iter()
            .enumerate()
            .flat_map(|(v, ov)| ov.edges.iter().enumerate().map(move |(k, e)| (v, k, e)))
    }

    /// Upper bound on the weight of any matching: per offline vertex, its
    /// heaviest incident edge.
    pub fn weight_bound(&self) -> f64 {
        let mut best = vec![0.0f64; self.offline.len()];
        for (_, _, e) in self.edge_refs() {
            if e.offline < best.len() && e.prob > 0.0 {
                best[e.offline] = best[e.offline].max(e.weight);
            }
        }
        let by_offline: f64 = best.iter().sum();
        let by_online: f64 = self
            .online
            .iter()
            .map(|v| {
                v.edges
                    .iter()
                    .filter(|e| e.prob > 0.0)
                    .map(|e| e.weight)
                    .fold(0.0, f64::max)
            })
            .sum();
        by_offline.min(by_online)
    }
}

/// Rule broken by a [`Violation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    ProbabilityRange,
    NegativeWeight,
    DuplicateEdge,
    UnknownOffline,
    DownwardClosure,
    MissingEmptyString,
    BudgetCosts,
    RowSum,
    UnknownType,
    NegativeMass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub location: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.location, self.rule, self.detail)
    }
}

/// All invariant violations in `g`; empty when the graph is well formed.
pub fn validate_graph(g: &StochasticGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let n_off = g.offline.len();
    for (vi, v) in g.online.iter().enumerate() {
        let mut seen = HashSet::new();
        for (k, e) in v.edges.iter().enumerate() {
            let loc = format!("online {} ({}) edge {} -> offline {}", vi, v.id, k, e.offline);
            if !(0.0..=1.0).contains(&e.prob) {
                out.push(Violation {
                    location: loc.clone(),
                    rule: Rule::ProbabilityRange,
                    detail: format!("probability {} outside [0,1]", e.prob),
                });
            }
            if !(e.weight >= 0.0) {
                out.push(Violation {
                    location: loc.clone(),
                    rule: Rule::NegativeWeight,
                    detail: format!("weight {} is negative", e.weight),
                });
            }
            if e.offline >= n_off {
                out.push(Violation {
                    location: loc.clone(),
                    rule: Rule::UnknownOffline,
                    detail: format!("offline index {} but only {} offline vertices", e.offline, n_off),
                });
            }
            if !seen.insert(e.offline) {
                out.push(Violation {
                    location: loc,
                    rule: Rule::DuplicateEdge,
                    detail: "offline endpoint appears twice".into(),
                });
            }
        }
        out.extend(check_constraint(vi, v));
    }
    out
}

fn check_constraint(vi: usize, v: &OnlineVertex) -> Vec<Violation> {
    let loc = format!("online {} ({}) constraint", vi, v.id);
    let deg = v.degree();
    let mut out = Vec::new();
    match &v.constraint {
        ProbingConstraint::Patience { .. } => {}
        ProbingConstraint::Budget { budget, costs } => {
            if costs.len() != deg || costs.iter().any(|c| !(*c >= 0.0)) || !(*budget >= 0.0) {
                out.push(Violation {
                    location: loc,
                    rule: Rule::BudgetCosts,
                    detail: format!(
                        "budget {} with {} costs for {} edges; all must be non-negative",
                        budget,
                        costs.len(),
                        deg
                    ),
                });
            }
        }
        ProbingConstraint::Explicit { strings } => {
            if !strings.contains(&ProbeString::empty()) {
                out.push(Violation {
                    location: loc.clone(),
                    rule: Rule::MissingEmptyString,
                    detail: "λ is not a member".into(),
                });
            }
            for s in strings {
                if let Err(e) = check_string(s.as_slice(), deg) {
                    out.push(Violation {
                        location: loc.clone(),
                        rule: Rule::DownwardClosure,
                        detail: e.to_string(),
                    });
                    continue;
                }
                if let Some(missing) =
                    closure_witness(s.as_slice(), |t| Ok(strings.contains(&ProbeString::from(t))))
                        .ok()
                        .flatten()
                {
                    out.push(Violation {
                        location: loc.clone(),
                        rule: Rule::DownwardClosure,
                        detail: format!("{} is a member but {} is not", s, missing),
                    });
                }
            }
        }
        ProbingConstraint::OracleBacked(o) => {
            match o.query(&[]) {
                Ok(true) => {}
                _ => out.push(Violation {
                    location: loc.clone(),
                    rule: Rule::MissingEmptyString,
                    detail: "oracle rejects λ".into(),
                }),
            }
            for s in oracle_spot_samples(&v.constraint, deg) {
                if let Ok(Some(missing)) = closure_witness(s.as_slice(), |t| o.query(t)) {
                    out.push(Violation {
                        location: loc.clone(),
                        rule: Rule::DownwardClosure,
                        detail: format!("oracle admits {} but rejects {}", s, missing),
                    });
                }
            }
        }
    }
    out
}

/// A string obtained from `s` by deleting one character or swapping two
/// adjacent ones that `member` rejects. Closure under these two moves is
/// equivalent to closure under all substrings and permutations.
fn closure_witness<F>(s: &[usize], member: F) -> Result<Option<ProbeString>, String>
where
    F: Fn(&[usize]) -> Result<bool, String>,
{
    for k in 0..s.len() {
        let mut t = s.to_vec();
        t.remove(k);
        if !member(&t)? {
            return Ok(Some(t.into()));
        }
    }
    for k in 0..s.len().saturating_sub(1) {
        let mut t = s.to_vec();
        t.swap(k, k + 1);
        if !member(&t)? {
            return Ok(Some(t.into()));
        }
    }
    Ok(None)
}

/// Members used to spot-check an oracle: exhaustive for degree ≤ 4, random
/// walks otherwise.
fn oracle_spot_samples(c: &ProbingConstraint, degree: usize) -> Vec<ProbeString> {
    if degree <= 4 {
        return enumerate_strings(c, degree, 1_000).unwrap_or_default();
    }
    let mut rng = rng::seeded(0x5eed_0ac1e);
    let mut out = Vec::new();
    for _ in 0..64 {
        let mut s: Vec<usize> = Vec::new();
        loop {
            let free: Vec<usize> = (0..degree).filter(|e| !s.contains(e)).collect();
            if free.is_empty() {
                break;
            }
            let e = free[rng.random_range(0..free.len())];
            s.push(e);
            if !c.contains_unchecked(&s).unwrap_or(false) {
                s.pop();
                break;
            }
            if rng.random_bool(0.3) {
                break;
            }
        }
        out.push(s.into());
    }
    out
}

/// Type graph plus per-arrival type distributions.
#[derive(Clone, Debug)]
pub struct KnownIdInput {
    pub type_graph: StochasticGraph,
    /// Row `i` lists `(type node, r_i(b))` with strictly positive mass.
    pub distributions: Vec<Vec<(usize, f64)>>,
}

impl KnownIdInput {
    /// Builds the input, dropping zero-mass entries.
    pub fn new(type_graph: StochasticGraph, distributions: Vec<Vec<(usize, f64)>>) -> Self {
        let distributions = distributions
            .into_iter()
            .map(|row| row.into_iter().filter(|&(_, r)| r != 0.0).collect())
            .collect();
        KnownIdInput {
            type_graph,
            distributions,
        }
    }

    /// `n` i.i.d. arrivals with the same row.
    pub fn iid(type_graph: StochasticGraph, n: usize, row: Vec<(usize, f64)>) -> Self {
        Self::new(type_graph, vec![row; n])
    }

    /// Known stochastic graph as a point-mass input: arrival `i` is vertex `i`.
    pub fn from_known_graph(g: StochasticGraph) -> Self {
        let n = g.online.len();
        Self::new(g, (0..n).map(|i| vec![(i, 1.0)]).collect())
    }

    pub fn arrivals(&self) -> usize {
        self.distributions.len()
    }

    /// Whether every arrival has the same type distribution.
    pub fn is_iid(&self) -> bool {
        let sorted = |row: &Vec<(usize, f64)>| {
            let mut r = row.clone();
            r.sort_by_key(|e| e.0);
            r
        };
        self.distributions.windows(2).all(|w| sorted(&w[0]) == sorted(&w[1]))
    }

    /// Violations of the input invariants (including those of the type graph).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = validate_graph(&self.type_graph);
        let types = self.type_graph.online.len();
        for (i, row) in self.distributions.iter().enumerate() {
            let loc = format!("distribution {i}");
            let mut sum = 0.0;
            for &(b, r) in row {
                if b >= types {
                    out.push(Violation {
                        location: loc.clone(),
                        rule: Rule::UnknownType,
                        detail: format!("type {b} but type graph has {types} type nodes"),
                    });
                }
                if !(r >= 0.0) {
                    out.push(Violation {
                        location: loc.clone(),
                        rule: Rule::NegativeMass,
                        detail: format!("mass {r} for type {b}"),
                    });
                }
                sum += r;
            }
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                out.push(Violation {
                    location: loc,
                    rule: Rule::RowSum,
                    detail: format!("row sums to {sum}"),
                });
            }
        }
        out
    }
}

/// How the online arrivals are ordered.
#[derive(Clone, Debug, PartialEq)]
pub enum ArrivalModel {
    /// `order[t]` is the arrival index presented at step `t`.
    Adversarial(Vec<usize>),
    RandomOrder,
    /// Uniform arrival times in `[0,1]`, processed in increasing time.
    RandomArrivalTimes,
}

/// Realised order plus per-arrival times when the model draws them.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrivalSchedule {
    pub order: Vec<usize>,
    /// `times[i]` is the arrival time of arrival `i` (not of step `i`).
    pub times: Option<Vec<f64>>,
}

impl ArrivalModel {
    pub fn is_permutation(order: &[usize], n: usize) -> bool {
        if order.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
    }

    pub fn schedule<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<ArrivalSchedule, GraphError> {
        match self {
            ArrivalModel::Adversarial(order) => {
                if !Self::is_permutation(order, n) {
                    return Err(GraphError::Invalid(format!(
                        "arrival order {:?} is not a permutation of 0..{}",
                        order, n
                    )));
                }
                Ok(ArrivalSchedule {
                    order: order.clone(),
                    times: None,
                })
            }
            ArrivalModel::RandomOrder => {
                let mut order: Vec<usize> = (0..n).collect();
                rand::seq::SliceRandom::shuffle(order.as_mut_slice(), rng);
                Ok(ArrivalSchedule { order, times: None })
            }
            ArrivalModel::RandomArrivalTimes => {
                let times: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let mut order: Vec<usize> = (0..n).collect();
                // ties broken by arrival index
                order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
                Ok(ArrivalSchedule {
                    order,
                    times: Some(times),
                })
            }
        }
    }
}

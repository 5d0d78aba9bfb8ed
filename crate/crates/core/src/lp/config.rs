//! The configuration LP.
//!
//! A *slot* is an (arrival, type node) pair with probability mass `r_i(b)`;
//! for a known graph every online vertex is its own slot with mass one. For
//! each slot and each probe string `e` of the type's constraint there is a
//! column `x(e)` with objective `val(e)`. Rows:
//!
//! * one matching row per offline vertex `u`:
//!   `Σ p_{u} g(e_{<u}) x(e) ≤ 1` over all columns whose string contains `u`;
//! * one distribution row per slot: `Σ_e x(e) = r`.
//!
//! [`solve_lp_config`] solves the program either by enumerating every
//! column up front or by column generation. Column generation starts from the
//! λ column of each slot and prices slots with [`demand_oracle`] at the
//! current offline duals; a column enters while its utility exceeds the
//! slot's dual by more than [`PRICING_TOL`].

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::model::{LpModel, Sense};
use super::oracle::demand_oracle;
use super::simplex::simplex_solve;
use super::LpError;
use crate::graph::{enumerate_strings, Edge, KnownIdInput, ProbeString, StochasticGraph};

/// Reduced-cost threshold for a column to enter the restricted master.
pub const PRICING_TOL: f64 = 1e-9;
/// Default cap on column-generation rounds.
pub const DEFAULT_MAX_ROUNDS: usize = 10_000;
/// Default cap on strings enumerated per type node.
pub const DEFAULT_ENUM_CAP: usize = 100_000;

/// Probability that every edge of `s` is inactive; `g(λ) = 1`.
pub fn g_value(edges: &[Edge], s: &[usize]) -> f64 {
    s.iter().map(|&k| 1.0 - edges[k].prob).product()
}

/// Expected weight of the first active edge when `s` is probed in order.
pub fn val(edges: &[Edge], s: &[usize]) -> f64 {
    let mut surv = 1.0;
    let mut total = 0.0;
    for &k in s {
        total += edges[k].prob * edges[k].weight * surv;
        surv *= 1.0 - edges[k].prob;
    }
    total
}

/// `(arrival, type node, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub arrival: usize,
    pub type_node: usize,
    pub mass: f64,
}

/// Metadata of a configuration column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfigColumn {
    pub slot: usize,
    pub string: ProbeString,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumerate,
    ColumnGeneration,
}

/// A configuration LP together with the metadata of its columns.
#[derive(Clone, Debug)]
pub struct ConfigLp {
    pub num_offline: usize,
    pub slots: Vec<Slot>,
    pub columns: Vec<ConfigColumn>,
    pub model: LpModel,
}

impl ConfigLp {
    fn empty(g: &StochasticGraph, slots: Vec<Slot>) -> Self {
        let mut model = LpModel::new();
        for u in 0..g.offline_count() {
            model.add_row(Sense::Le, 1.0, format!("match[u={}]", g.offline[u]));
        }
        for s in &slots {
            model.add_row(
                Sense::Eq,
                s.mass,
                format!("dist[i={} b={}]", s.arrival, g.online[s.type_node].id),
            );
        }
        ConfigLp {
            num_offline: g.offline_count(),
            slots,
            columns: Vec::new(),
            model,
        }
    }

    fn dist_row(&self, slot: usize) -> usize {
        self.num_offline + slot
    }

    fn push_column(&mut self, g: &StochasticGraph, slot: usize, string: ProbeString) -> usize {
        let s = self.slots[slot];
        let edges = &g.online[s.type_node].edges;
        let mut entries = Vec::with_capacity(string.len() + 1);
        let mut surv = 1.0;
        for k in string.iter() {
            let e = &edges[k];
            entries.push((e.offline, e.prob * surv));
            surv *= 1.0 - e.prob;
        }
        entries.push((self.dist_row(slot), 1.0));
        let label = format!(
            "x[slot={} i={} b={} s={}]",
            slot, s.arrival, s.type_node, string
        );
        self.model.add_column(val(edges, string.as_slice()), entries, label);
        self.columns.push(ConfigColumn { slot, string });
        self.columns.len() - 1
    }

    /// Number of rows and columns.
    pub fn shape(&self) -> (usize, usize) {
        (self.model.num_rows(), self.model.num_columns())
    }
}

fn known_graph_slots(g: &StochasticGraph) -> Vec<Slot> {
    (0..g.online_count())
        .map(|v| Slot {
            arrival: v,
            type_node: v,
            mass: 1.0,
        })
        .collect()
}

fn id_slots(input: &KnownIdInput) -> Vec<Slot> {
    let mut slots = Vec::new();
    for (i, row) in input.distributions.iter().enumerate() {
        for &(b, r) in row {
            if r > 0.0 {
                slots.push(Slot {
                    arrival: i,
                    type_node: b,
                    mass: r,
                });
            }
        }
    }
    slots
}

fn build_enumerated(g: &StochasticGraph, slots: Vec<Slot>, cap: usize) -> Result<ConfigLp, LpError> {
    let mut lp = ConfigLp::empty(g, slots);
    let mut cache: HashMap<usize, Vec<ProbeString>> = HashMap::new();
    for slot in 0..lp.slots.len() {
        let b = lp.slots[slot].type_node;
        if !cache.contains_key(&b) {
            let v = &g.online[b];
            cache.insert(b, enumerate_strings(&v.constraint, v.degree(), cap)?);
        }
        for s in &cache[&b] {
            lp.push_column(g, slot, s.clone());
        }
    }
    Ok(lp)
}

/// LP with every column of every online vertex of `g`.
pub fn build_lp_config(g: &StochasticGraph, cap: usize) -> Result<ConfigLp, LpError> {
    build_enumerated(g, known_graph_slots(g), cap)
}

/// LP with every column `x_i(e || b)` of a known i.d. input.
pub fn build_lp_config_id(input: &KnownIdInput, cap: usize) -> Result<ConfigLp, LpError> {
    build_enumerated(&input.type_graph, id_slots(input), cap)
}

/// Optimal solution of a configuration LP.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSolution {
    pub num_offline: usize,
    pub num_arrivals: usize,
    pub slots: Vec<Slot>,
    /// Columns with positive mass.
    pub columns: Vec<ConfigColumn>,
    pub masses: Vec<f64>,
    pub objective: f64,
    /// Dual price of each offline matching row.
    pub alpha: Vec<f64>,
    /// Dual of each slot's distribution row.
    pub beta: Vec<f64>,
    /// `edge_vars[slot][k]`: induced edge variable of local edge `k` of the
    /// slot's type node.
    pub edge_vars: Vec<Vec<f64>>,
    /// Columns in the final restricted master (all columns when enumerated).
    pub columns_generated: usize,
    pub rounds: usize,
}

impl ConfigSolution {
    /// Mass of each column grouped per slot.
    pub fn slot_columns(&self) -> Vec<Vec<(ProbeString, f64)>> {
        let mut out = vec![Vec::new(); self.slots.len()];
        for (c, &m) in self.columns.iter().zip(&self.masses) {
            out[c.slot].push((c.string.clone(), m));
        }
        out
    }

    /// Probability `z[u][i]` that arrival `i` commits to `u` under VertexProbe.
    pub fn commit_probabilities(&self, g: &StochasticGraph) -> Vec<Vec<f64>> {
        let mut z = vec![vec![0.0; self.num_arrivals]; self.num_offline];
        for (slot, s) in self.slots.iter().enumerate() {
            for (k, e) in g.online[s.type_node].edges.iter().enumerate() {
                z[e.offline][s.arrival] += e.prob * self.edge_vars[slot][k];
            }
        }
        z
    }

    /// `Σ_e w_e p_e x̃_e`.
    pub fn edge_objective(&self, g: &StochasticGraph) -> f64 {
        let mut total = 0.0;
        for (slot, s) in self.slots.iter().enumerate() {
            for (k, e) in g.online[s.type_node].edges.iter().enumerate() {
                total += e.weight * e.prob * self.edge_vars[slot][k];
            }
        }
        total
    }

    /// `Σ val(e) x(e)`: the expected weight of running VertexProbe at every
    /// slot without contention.
    pub fn relaxed_value(&self, g: &StochasticGraph) -> f64 {
        self.columns
            .iter()
            .zip(&self.masses)
            .map(|(c, m)| {
                let b = self.slots[c.slot].type_node;
                val(&g.online[b].edges, c.string.as_slice()) * m
            })
            .sum()
    }

    /// Averages the solution over arrivals whose type distributions agree,
    /// so every arrival of an i.i.d. input uses the same string law. The
    /// result is feasible and has the same objective. Returns `None` if two
    /// slots of one type carry different mass.
    pub fn symmetrized(&self) -> Option<ConfigSolution> {
        let n = self.num_arrivals;
        if n == 0 {
            return Some(self.clone());
        }
        let mut by_type: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, s) in self.slots.iter().enumerate() {
            by_type.entry(s.type_node).or_default().push(k);
        }
        let mut pooled: BTreeMap<(usize, ProbeString), f64> = BTreeMap::new();
        for (c, &m) in self.columns.iter().zip(&self.masses) {
            *pooled.entry((self.slots[c.slot].type_node, c.string.clone())).or_insert(0.0) += m / n as f64;
        }
        let mut avg_vars: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (&b, slots) in &by_type {
            let mass = self.slots[slots[0]].mass;
            if slots.len() != n || slots.iter().any(|&k| (self.slots[k].mass - mass).abs() > 1e-12) {
                return None;
            }
            let width = self.edge_vars[slots[0]].len();
            let mut acc = vec![0.0; width];
            for &k in slots {
                for (a, x) in acc.iter_mut().zip(&self.edge_vars[k]) {
                    *a += x / n as f64;
                }
            }
            avg_vars.insert(b, acc);
        }
        let mut out = self.clone();
        out.columns.clear();
        out.masses.clear();
        for (k, s) in self.slots.iter().enumerate() {
            out.edge_vars[k] = avg_vars[&s.type_node].clone();
            for ((b, string), &m) in pooled.range((s.type_node, ProbeString::empty())..) {
                if *b != s.type_node {
                    break;
                }
                if m > 0.0 {
                    out.columns.push(ConfigColumn { slot: k, string: string.clone() });
                    out.masses.push(m);
                }
            }
        }
        Some(out)
    }

    /// `Σ_e p_e x̃_e` per offline vertex.
    pub fn offline_load(&self, g: &StochasticGraph) -> Vec<f64> {
        self.commit_probabilities(g)
            .iter()
            .map(|row| row.iter().sum())
            .collect()
    }
}

/// Induced edge variables `x̃` for every slot: the mass reaching each edge
/// after the edges before it in the string were inactive.
pub fn induced_edge_variables(
    g: &StochasticGraph,
    slots: &[Slot],
    columns: &[ConfigColumn],
    masses: &[f64],
) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = slots
        .iter()
        .map(|s| vec![0.0; g.online[s.type_node].degree()])
        .collect();
    for (c, &m) in columns.iter().zip(masses) {
        if m == 0.0 {
            continue;
        }
        let edges = &g.online[slots[c.slot].type_node].edges;
        let mut surv = 1.0;
        for k in c.string.iter() {
            out[c.slot][k] += surv * m;
            surv *= 1.0 - edges[k].prob;
        }
    }
    out
}

fn extract(
    g: &StochasticGraph,
    lp: &ConfigLp,
    num_arrivals: usize,
    rounds: usize,
) -> Result<ConfigSolution, LpError> {
    let sol = simplex_solve(&lp.model)?;
    let mut columns = Vec::new();
    let mut masses = Vec::new();
    for (c, &x) in lp.columns.iter().zip(&sol.x) {
        if x > 0.0 {
            columns.push(c.clone());
            masses.push(x);
        }
    }
    let edge_vars = induced_edge_variables(g, &lp.slots, &columns, &masses);
    Ok(ConfigSolution {
        num_offline: lp.num_offline,
        num_arrivals,
        slots: lp.slots.clone(),
        objective: sol.objective,
        alpha: sol.duals[..lp.num_offline].to_vec(),
        beta: sol.duals[lp.num_offline..].to_vec(),
        columns,
        masses,
        edge_vars,
        columns_generated: lp.columns.len(),
        rounds,
    })
}

fn column_generation(
    g: &StochasticGraph,
    slots: Vec<Slot>,
    num_arrivals: usize,
    max_rounds: usize,
) -> Result<ConfigSolution, LpError> {
    let mut lp = ConfigLp::empty(g, slots);
    let mut present: HashSet<ConfigColumn> = HashSet::new();
    for slot in 0..lp.slots.len() {
        lp.push_column(g, slot, ProbeString::empty());
        present.insert(ConfigColumn {
            slot,
            string: ProbeString::empty(),
        });
    }
    let types: Vec<usize> = {
        let mut t: Vec<usize> = lp.slots.iter().map(|s| s.type_node).collect();
        t.sort_unstable();
        t.dedup();
        t
    };
    for round in 1..=max_rounds {
        let sol = simplex_solve(&lp.model)?;
        let alpha: Vec<f64> = sol.duals[..lp.num_offline].iter().map(|a| a.max(0.0)).collect();
        // prices depend only on the type node, so price each type once
        let priced: Vec<(usize, super::oracle::DemandChoice)> = types
            .par_iter()
            .map(|&b| demand_oracle(&g.online[b], &alpha).map(|d| (b, d)))
            .collect::<Result<_, _>>()?;
        let priced: HashMap<usize, super::oracle::DemandChoice> = priced.into_iter().collect();
        let mut added = 0;
        let mut gap: f64 = 0.0;
        for slot in 0..lp.slots.len() {
            let beta = sol.duals[lp.dist_row(slot)];
            let choice = &priced[&lp.slots[slot].type_node];
            // dual row scales with the slot mass: Σ x = r, so compare per unit
            let violation = choice.value - beta;
            if violation > PRICING_TOL * (1.0 + beta.abs()) {
                let col = ConfigColumn {
                    slot,
                    string: choice.string.clone(),
                };
                if present.insert(col.clone()) {
                    lp.push_column(g, slot, col.string);
                    added += 1;
                }
                gap = gap.max(violation);
            }
        }
        if added == 0 {
            return extract(g, &lp, num_arrivals, round);
        }
        if round == max_rounds {
            return Err(LpError::NonConvergence { rounds: round, gap });
        }
    }
    Err(LpError::NonConvergence {
        rounds: max_rounds,
        gap: f64::NAN,
    })
}

/// Solves the configuration LP of a known graph.
pub fn solve_lp_config(g: &StochasticGraph, method: Method) -> Result<ConfigSolution, LpError> {
    match method {
        Method::Enumerate => {
            let lp = build_lp_config(g, DEFAULT_ENUM_CAP)?;
            extract(g, &lp, g.online_count(), 1)
        }
        Method::ColumnGeneration => {
            column_generation(g, known_graph_slots(g), g.online_count(), DEFAULT_MAX_ROUNDS)
        }
    }
}

/// Solves the configuration LP of a known i.d. input.
pub fn solve_lp_config_id(input: &KnownIdInput, method: Method) -> Result<ConfigSolution, LpError> {
    match method {
        Method::Enumerate => {
            let lp = build_lp_config_id(input, DEFAULT_ENUM_CAP)?;
            extract(&input.type_graph, &lp, input.arrivals(), 1)
        }
        Method::ColumnGeneration => column_generation(
            &input.type_graph,
            id_slots(input),
            input.arrivals(),
            DEFAULT_MAX_ROUNDS,
        ),
    }
}

/// Column generation with an explicit round cap.
pub fn solve_lp_config_id_capped(
    input: &KnownIdInput,
    max_rounds: usize,
) -> Result<ConfigSolution, LpError> {
    column_generation(&input.type_graph, id_slots(input), input.arrivals(), max_rounds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{OnlineVertex, ProbingConstraint};

    fn single(edges: Vec<Edge>, c: ProbingConstraint, offline: usize) -> StochasticGraph {
        StochasticGraph::with_offline_count(offline, vec![OnlineVertex::new("v", edges, c)])
    }

    /// `val` and `g` by enumerating all edge-state vectors.
    fn brute_val_g(edges: &[Edge], s: &[usize]) -> (f64, f64) {
        let k = s.len();
        let (mut v, mut g) = (0.0, 0.0);
        for mask in 0u32..(1 << k) {
            let pr: f64 = (0..k)
                .map(|i| {
                    let p = edges[s[i]].prob;
                    if mask >> i & 1 == 1 {
                        p
                    } else {
                        1.0 - p
                    }
                })
                .product();
            match (0..k).find(|i| mask >> i & 1 == 1) {
                Some(i) => v += pr * edges[s[i]].weight,
                None => g += pr,
            }
        }
        (v, g)
    }

    #[test]
    fn g_and_val_examples() {
        let e = vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.5), Edge::new(2, 1.0, 1.0)];
        assert_eq!(g_value(&e, &[]), 1.0);
        assert_eq!(val(&e, &[]), 0.0);
        let (bv, bg) = brute_val_g(&e, &[0, 1]);
        assert!((bg - 0.25).abs() < 1e-15 && (g_value(&e, &[0, 1]) - bg).abs() < 1e-15);
        assert!((bv - 0.75).abs() < 1e-15 && (val(&e, &[0, 1]) - bv).abs() < 1e-15);
        assert_eq!(g_value(&e, &[0, 2]), 0.0);

        let w = vec![Edge::new(0, 2.0, 0.5), Edge::new(1, 1.0, 0.5)];
        assert!((brute_val_g(&w, &[0, 1]).0 - 1.25).abs() < 1e-15);
        assert!((brute_val_g(&w, &[1, 0]).0 - 1.0).abs() < 1e-15);
        assert!((val(&w, &[0, 1]) - 1.25).abs() < 1e-15);
        assert!((val(&w, &[1, 0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn two_edge_unit_patience_model() {
        let g = single(
            vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.5)],
            ProbingConstraint::patience(1),
            2,
        );
        let lp = build_lp_config(&g, 100).unwrap();
        assert_eq!(lp.shape(), (3, 3));
        let obj: Vec<f64> = lp.model.columns.iter().map(|c| c.obj).collect();
        assert_eq!(obj, vec![0.0, 0.5, 0.5]);
        for m in [Method::Enumerate, Method::ColumnGeneration] {
            let s = solve_lp_config(&g, m).unwrap();
            assert!((s.objective - 0.5).abs() < 1e-12);
            // dual certificate: Σ α + Σ β equals the primal objective
            let dual: f64 = s.alpha.iter().sum::<f64>() + s.beta.iter().sum::<f64>();
            assert!((dual - s.objective).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_graph() {
        let g = StochasticGraph::default();
        let lp = build_lp_config(&g, 10).unwrap();
        assert_eq!(lp.shape(), (0, 0));
        assert_eq!(solve_lp_config(&g, Method::Enumerate).unwrap().objective, 0.0);
        assert_eq!(solve_lp_config(&g, Method::ColumnGeneration).unwrap().objective, 0.0);
    }

    #[test]
    fn unbounded_single_vertex_probes_everything() {
        let g = single(
            (0..3).map(|u| Edge::new(u, 1.0, 0.5)).collect(),
            ProbingConstraint::unbounded(),
            3,
        );
        for m in [Method::Enumerate, Method::ColumnGeneration] {
            let s = solve_lp_config(&g, m).unwrap();
            assert!((s.objective - 0.875).abs() < 1e-12, "{m:?}: {}", s.objective);
        }
    }

    #[test]
    fn induced_edge_variables_examples() {
        let g = single(
            vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.5)],
            ProbingConstraint::patience(2),
            2,
        );
        let slots = known_graph_slots(&g);
        let lambda = vec![ConfigColumn {
            slot: 0,
            string: ProbeString::empty(),
        }];
        assert_eq!(induced_edge_variables(&g, &slots, &lambda, &[1.0]), vec![vec![0.0, 0.0]]);
        let both = vec![ConfigColumn {
            slot: 0,
            string: vec![0, 1].into(),
        }];
        assert_eq!(induced_edge_variables(&g, &slots, &both, &[1.0]), vec![vec![1.0, 0.5]]);
    }

    #[test]
    fn point_mass_id_input_matches_known_graph() {
        let g = StochasticGraph::with_offline_count(
            2,
            vec![
                OnlineVertex::new(
                    "a",
                    vec![Edge::new(0, 1.0, 0.6), Edge::new(1, 2.0, 0.3)],
                    ProbingConstraint::patience(2),
                ),
                OnlineVertex::new("b", vec![Edge::new(0, 3.0, 0.4)], ProbingConstraint::patience(1)),
            ],
        );
        let known = build_lp_config(&g, 100).unwrap();
        let id = build_lp_config_id(&KnownIdInput::from_known_graph(g.clone()), 100).unwrap();
        assert_eq!(known.model, id.model);
        assert_eq!(known.columns, id.columns);
    }

    #[test]
    fn deterministic_arrivals_share_one_offline_vertex() {
        let g = single(vec![Edge::new(0, 1.0, 1.0)], ProbingConstraint::patience(1), 1);
        let input = KnownIdInput::new(g, vec![vec![(0, 1.0)], vec![(0, 1.0)]]);
        for m in [Method::Enumerate, Method::ColumnGeneration] {
            let s = solve_lp_config_id(&input, m).unwrap();
            assert!((s.objective - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_iid_arrivals_get_symmetric_value() {
        let g = StochasticGraph::with_offline_count(
            2,
            vec![
                OnlineVertex::new(
                    "t0",
                    vec![Edge::new(0, 1.0, 0.7), Edge::new(1, 1.0, 0.4)],
                    ProbingConstraint::patience(1),
                ),
                OnlineVertex::new(
                    "t1",
                    vec![Edge::new(0, 1.0, 0.7), Edge::new(1, 1.0, 0.4)],
                    ProbingConstraint::patience(1),
                ),
            ],
        );
        let input = KnownIdInput::iid(g.clone(), 2, vec![(0, 0.5), (1, 0.5)]);
        let s = solve_lp_config_id(&input, Method::Enumerate).unwrap();
        let swapped = KnownIdInput::new(g, vec![vec![(1, 0.5), (0, 0.5)], vec![(0, 0.5), (1, 0.5)]]);
        let t = solve_lp_config_id(&swapped, Method::Enumerate).unwrap();
        assert!((s.objective - t.objective).abs() < 1e-12);
        // u0 saturates at x-mass 1/0.7 on e0, the remaining mass goes to e1
        let expected = 1.0 + 0.4 * (2.0 - 1.0 / 0.7);
        assert!((s.objective - expected).abs() < 1e-9, "{}", s.objective);
        let cg = solve_lp_config_id(&input, Method::ColumnGeneration).unwrap();
        assert!((cg.objective - expected).abs() < 1e-9);

        let sym = s.symmetrized().unwrap();
        let z = sym.commit_probabilities(&input.type_graph);
        for row in &z {
            assert!((row[0] - row[1]).abs() < 1e-12);
        }
        assert!((sym.relaxed_value(&input.type_graph) - expected).abs() < 1e-9);
        let load = sym.offline_load(&input.type_graph);
        assert!(load.iter().all(|&l| l <= 1.0 + 1e-9));
        for slot in sym.slot_columns().iter().zip(&sym.slots) {
            let total: f64 = slot.0.iter().map(|c| c.1).sum();
            assert!((total - slot.1.mass).abs() < 1e-12);
        }
        assert!(input.is_iid() && swapped.is_iid());
        assert!(t.symmetrized().is_some());
    }

    #[test]
    fn solution_invariants_hold() {
        let g = StochasticGraph::with_offline_count(
            2,
            vec![
                OnlineVertex::new(
                    "a",
                    vec![Edge::new(0, 1.0, 0.9), Edge::new(1, 0.7, 0.8)],
                    ProbingConstraint::patience(2),
                ),
                OnlineVertex::new(
                    "b",
                    vec![Edge::new(0, 2.0, 0.9), Edge::new(1, 0.1, 0.2)],
                    ProbingConstraint::patience(2),
                ),
            ],
        );
        let s = solve_lp_config(&g, Method::Enumerate).unwrap();
        for load in s.offline_load(&g) {
            assert!(load <= 1.0 + 1e-9);
        }
        let per_slot = s.slot_columns();
        for cols in per_slot {
            let total: f64 = cols.iter().map(|(_, m)| m).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
        assert!((s.edge_objective(&g) - s.objective).abs() < 1e-9);
        assert!((s.relaxed_value(&g) - s.objective).abs() < 1e-9);
    }
}

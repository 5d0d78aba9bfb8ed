//! Edge-based LPs: the standard patience LP and its unbounded-patience
//! strengthening with one row per subset of each online vertex's edges.
//!
//! Both use one variable `x_e` per edge, in [`StochasticGraph::edge_refs`]
//! order, with objective `w_e p_e`.

use super::model::{LpModel, Sense};
use super::LpError;
use crate::graph::{ProbingConstraint, StochasticGraph};

/// Largest online degree for which subset rows are generated.
pub const QC_MAX_DEGREE: usize = 12;

fn edge_columns(g: &StochasticGraph, m: &mut LpModel, mut online_rows: impl FnMut(usize, usize) -> Vec<(usize, f64)>) {
    for (v, k, e) in g.edge_refs() {
        let mut entries = vec![(e.offline, e.prob)];
        entries.extend(online_rows(v, k));
        m.add_column(e.weight * e.prob, entries, format!("x[v={} e={} u={}]", g.online[v].id, k, g.offline[e.offline]));
    }
}

fn offline_rows(g: &StochasticGraph, m: &mut LpModel) {
    for u in &g.offline {
        m.add_row(Sense::Le, 1.0, format!("offline[u={u}]"));
    }
}

/// The standard LP: offline and online probability rows, patience rows and
/// `x_e ≤ 1`. Unbounded patience uses the vertex degree.
pub fn build_lp_std(g: &StochasticGraph) -> Result<LpModel, LpError> {
    let mut m = LpModel::new();
    offline_rows(g, &mut m);
    let mut base = Vec::with_capacity(g.online_count());
    for v in &g.online {
        let limit = match v.constraint {
            ProbingConstraint::Patience { limit } => limit.min(v.degree()),
            _ => {
                return Err(LpError::UnsupportedConstraint(format!(
                    "the standard LP needs patience constraints (vertex {})",
                    v.id
                )))
            }
        };
        let r = m.add_row(Sense::Le, 1.0, format!("online[v={}]", v.id));
        m.add_row(Sense::Le, limit as f64, format!("patience[v={}]", v.id));
        base.push(r);
    }
    let bound_start = m.num_rows();
    for (v, k, _) in g.edge_refs() {
        m.add_row(Sense::Le, 1.0, format!("bound[v={} e={}]", g.online[v].id, k));
    }
    let mut idx = 0;
    edge_columns(g, &mut m, |v, k| {
        let p = g.online[v].edges[k].prob;
        idx += 1;
        vec![(base[v], p), (base[v] + 1, 1.0), (bound_start + idx - 1, 1.0)]
    });
    Ok(m)
}

/// The subset-row LP for unbounded patience: for every `S ⊆ ∂(v)`,
/// `Σ_{e∈S} p_e x_e ≤ 1 − Π_{e∈S}(1 − p_e)`.
pub fn build_lp_qc(g: &StochasticGraph) -> Result<LpModel, LpError> {
    let mut m = LpModel::new();
    offline_rows(g, &mut m);
    // first subset row of each online vertex
    let mut first = Vec::with_capacity(g.online_count());
    for v in &g.online {
        if !v.constraint.is_unbounded_for(v.degree()) {
            return Err(LpError::UnsupportedConstraint(format!(
                "the subset LP needs unbounded patience (vertex {})",
                v.id
            )));
        }
        if v.degree() > QC_MAX_DEGREE {
            return Err(LpError::UnsupportedConstraint(format!(
                "vertex {} has degree {} > {QC_MAX_DEGREE}",
                v.id,
                v.degree()
            )));
        }
        first.push(m.num_rows());
        for mask in 1u32..(1 << v.degree()) {
            let miss: f64 = (0..v.degree())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| 1.0 - v.edges[k].prob)
                .product();
            m.add_row(Sense::Le, 1.0 - miss, format!("subset[v={} S={mask:#b}]", v.id));
        }
    }
    edge_columns(g, &mut m, |v, k| {
        let ov = &g.online[v];
        let p = ov.edges[k].prob;
        (1u32..(1 << ov.degree()))
            .filter(|mask| mask >> k & 1 == 1)
            .map(|mask| (first[v] + mask as usize - 1, p))
            .collect()
    });
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Edge, OnlineVertex};
    use crate::lp::simplex_solve;

    fn single(p: f64, w: f64, c: ProbingConstraint) -> StochasticGraph {
        StochasticGraph::with_offline_count(1, vec![OnlineVertex::new("v", vec![Edge::new(0, w, p)], c)])
    }

    #[test]
    fn single_edge_both_lps() {
        let std = simplex_solve(&build_lp_std(&single(0.5, 3.0, ProbingConstraint::patience(1))).unwrap()).unwrap();
        assert!((std.objective - 1.5).abs() < 1e-12);
        let qc = simplex_solve(&build_lp_qc(&single(0.5, 3.0, ProbingConstraint::unbounded())).unwrap()).unwrap();
        assert!((qc.objective - 1.5).abs() < 1e-12);
    }

    #[test]
    fn wrong_constraint_kinds_are_rejected() {
        let b = single(0.5, 1.0, ProbingConstraint::budget(1.0, vec![0.5]));
        assert!(matches!(build_lp_std(&b), Err(LpError::UnsupportedConstraint(_))));
        let p = StochasticGraph::with_offline_count(
            2,
            vec![OnlineVertex::new(
                "v",
                vec![Edge::new(0, 1.0, 0.5), Edge::new(1, 1.0, 0.5)],
                ProbingConstraint::patience(1),
            )],
        );
        assert!(matches!(build_lp_qc(&p), Err(LpError::UnsupportedConstraint(_))));
        let wide = StochasticGraph::with_offline_count(
            13,
            vec![OnlineVertex::new(
                "v",
                (0..13).map(|u| Edge::new(u, 1.0, 0.1)).collect(),
                ProbingConstraint::unbounded(),
            )],
        );
        assert!(matches!(build_lp_qc(&wide), Err(LpError::UnsupportedConstraint(_))));
    }

    #[test]
    fn subset_rows_cap_one_vertex_at_its_activation_probability() {
        // three edges p = 0.5 to distinct offline vertices: value 1 − 0.5³
        let g = StochasticGraph::with_offline_count(
            3,
            vec![OnlineVertex::new(
                "v",
                (0..3).map(|u| Edge::new(u, 1.0, 0.5)).collect(),
                ProbingConstraint::unbounded(),
            )],
        );
        let m = build_lp_qc(&g).unwrap();
        assert_eq!(m.num_rows(), 3 + 7);
        let s = simplex_solve(&m).unwrap();
        assert!((s.objective - 0.875).abs() < 1e-12);
        // the standard LP only sees Σ p x ≤ 1
        let s = simplex_solve(&build_lp_std(&g).unwrap()).unwrap();
        assert!((s.objective - 1.0).abs() < 1e-12);
    }
}

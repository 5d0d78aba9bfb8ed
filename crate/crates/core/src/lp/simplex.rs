//! Dense revised simplex with a two-phase start.
//!
//! The basis inverse is kept explicitly and updated with one eta step per
//! pivot; it is rebuilt from scratch every [`REFACTOR_EVERY`] pivots and once
//! more before the solution is reported. Pricing is Dantzig's largest reduced
//! cost. After [`BLAND_AFTER`] consecutive degenerate pivots the solver
//! switches to Bland's smallest-index rule until a pivot makes progress again,
//! which rules out cycling.

use super::model::{LpModel, Sense};
use super::LpError;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Relative optimality tolerance on reduced costs and the duality gap.
pub const OPT_TOL: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const BLAND_AFTER: usize = 500;

/// Primal-dual pair returned by [`simplex_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// One dual value per row (≥ 0 for `≤` rows, ≤ 0 for `≥` rows).
    pub duals: Vec<f64>,
    pub iterations: usize,
}

impl SimplexSolution {
    /// `Σ_i rhs_i y_i`.
    pub fn dual_objective(&self, m: &LpModel) -> f64 {
        m.rows.iter().zip(&self.duals).map(|(r, y)| r.rhs * y).sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Structural,
    Slack,
    Artificial,
}

struct Tableau {
    m: usize,
    /// Dense columns of the standard-form matrix, including slacks and artificials.
    cols: Vec<Vec<f64>>,
    kinds: Vec<Kind>,
    b: Vec<f64>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    binv: Vec<Vec<f64>>,
    xb: Vec<f64>,
    iterations: usize,
    since_refactor: usize,
}

/// Maximises `m`. Fails with [`LpError::Infeasible`], [`LpError::Unbounded`]
/// or [`LpError::Stall`].
pub fn simplex_solve(model: &LpModel) -> Result<SimplexSolution, LpError> {
    let m = model.num_rows();
    let n = model.num_columns();
    if m == 0 {
        // every column is free to grow; bounded only if no positive objective
        if model.columns.iter().any(|c| c.obj > 0.0) {
            return Err(LpError::Unbounded);
        }
        return Ok(SimplexSolution {
            x: vec![0.0; n],
            objective: 0.0,
            duals: Vec::new(),
            iterations: 0,
        });
    }

    // Standard form: flip rows with negative rhs so b ≥ 0.
    let flip: Vec<bool> = model.rows.iter().map(|r| r.rhs < 0.0).collect();
    let b: Vec<f64> = model.rows.iter().map(|r| r.rhs.abs()).collect();
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n + 2 * m);
    let mut kinds = Vec::with_capacity(n + 2 * m);
    for c in &model.columns {
        let mut d = vec![0.0; m];
        for &(i, a) in &c.entries {
            d[i] = if flip[i] { -a } else { a };
        }
        cols.push(d);
        kinds.push(Kind::Structural);
    }
    let mut basis = vec![usize::MAX; m];
    for (i, row) in model.rows.iter().enumerate() {
        let sense = match (row.sense, flip[i]) {
            (Sense::Le, false) | (Sense::Ge, true) => Sense::Le,
            (Sense::Ge, false) | (Sense::Le, true) => Sense::Ge,
            (Sense::Eq, _) => Sense::Eq,
        };
        if sense != Sense::Eq {
            let mut d = vec![0.0; m];
            d[i] = if sense == Sense::Le { 1.0 } else { -1.0 };
            cols.push(d);
            kinds.push(Kind::Slack);
            if sense == Sense::Le {
                basis[i] = cols.len() - 1;
            }
        }
    }
    for i in 0..m {
        if basis[i] == usize::MAX {
            let mut d = vec![0.0; m];
            d[i] = 1.0;
            cols.push(d);
            kinds.push(Kind::Artificial);
            basis[i] = cols.len() - 1;
        }
    }
    let total = cols.len();
    let mut in_basis = vec![false; total];
    for &j in &basis {
        in_basis[j] = true;
    }
    let mut t = Tableau {
        m,
        cols,
        kinds,
        b,
        basis,
        in_basis,
        binv: identity(m),
        xb: Vec::new(),
        iterations: 0,
        since_refactor: 0,
    };
    t.xb = t.b.clone();
    let cap = 20_000 + 50 * (total + m);

    // Phase 1: maximise −Σ artificials.
    if t.kinds.contains(&Kind::Artificial) {
        let c1: Vec<f64> = t
            .kinds
            .iter()
            .map(|k| if *k == Kind::Artificial { -1.0 } else { 0.0 })
            .collect();
        t.optimize(&c1, false, cap)?;
        let infeas: f64 = t
            .basis
            .iter()
            .zip(&t.xb)
            .filter(|(j, _)| t.kinds[**j] == Kind::Artificial)
            .map(|(_, v)| *v)
            .sum();
        let scale = 1.0 + t.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if infeas > FEAS_TOL * scale {
            return Err(LpError::Infeasible);
        }
        t.drive_out_artificials();
    }

    // Phase 2.
    let mut c2 = vec![0.0; total];
    for (j, col) in model.columns.iter().enumerate() {
        c2[j] = col.obj;
    }
    t.optimize(&c2, true, cap)?;
    t.refactor()?;

    let mut x = vec![0.0; n];
    for (i, &j) in t.basis.iter().enumerate() {
        if j < n {
            x[j] = t.xb[i].max(0.0);
        }
    }
    let y = t.duals(&c2);
    let duals: Vec<f64> = y
        .iter()
        .zip(&flip)
        .map(|(&v, &f)| if f { -v } else { v })
        .collect();
    let residual = model.primal_residual(&x);
    let scale = 1.0 + t.b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if residual > FEAS_TOL * scale {
        return Err(LpError::Stall {
            iterations: t.iterations,
            residual,
        });
    }
    Ok(SimplexSolution {
        objective: model.objective_value(&x),
        x,
        duals,
        iterations: t.iterations,
    })
}

fn identity(m: usize) -> Vec<Vec<f64>> {
    (0..m)
        .map(|i| {
            let mut r = vec![0.0; m];
            r[i] = 1.0;
            r
        })
        .collect()
}

impl Tableau {
    fn duals(&self, c: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for (i, &j) in self.basis.iter().enumerate() {
            let cb = c[j];
            if cb != 0.0 {
                for (k, yk) in y.iter_mut().enumerate() {
                    *yk += cb * self.binv[i][k];
                }
            }
        }
        y
    }

    fn ftran(&self, col: &[f64]) -> Vec<f64> {
        self.binv
            .iter()
            .map(|row| row.iter().zip(col).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn dot(y: &[f64], col: &[f64]) -> f64 {
        y.iter().zip(col).map(|(a, b)| a * b).sum()
    }

    fn optimize(&mut self, c: &[f64], phase_two: bool, cap: usize) -> Result<(), LpError> {
        let cscale = 1.0 + c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tol = OPT_TOL * 1e-2 * cscale;
        let mut degenerate_run = 0usize;
        loop {
            if self.iterations >= cap {
                return Err(LpError::Stall {
                    iterations: self.iterations,
                    residual: self.worst_residual(),
                });
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor()?;
            }
            let y = self.duals(c);
            let bland = degenerate_run >= BLAND_AFTER;
            let mut entering = None;
            let mut best = tol;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || (phase_two && self.kinds[j] == Kind::Artificial) {
                    continue;
                }
                let d = c[j] - Self::dot(&y, &self.cols[j]);
                if d > best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(q) = entering else {
                return Ok(());
            };
            let u = self.ftran(&self.cols[q]);

            // ratio test; ties go to the largest pivot, or the smallest basic
            // index under Bland's rule
            let mut leave: Option<usize> = None;
            let mut theta = f64::INFINITY;
            for i in 0..self.m {
                if u[i] > PIVOT_TOL {
                    let r = self.xb[i].max(0.0) / u[i];
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            if r < theta - 1e-12 {
                                true
                            } else if r <= theta + 1e-12 {
                                if bland {
                                    self.basis[i] < self.basis[l]
                                } else {
                                    u[i] > u[l]
                                }
                            } else {
                                false
                            }
                        }
                    };
                    if better {
                        leave = Some(i);
                        theta = r.min(theta);
                    }
                }
            }
            let Some(r) = leave else {
                return Err(LpError::Unbounded);
            };
            if theta <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q, &u);
        }
    }

    fn pivot(&mut self, r: usize, q: usize, u: &[f64]) {
        let piv = u[r];
        let theta = self.xb[r] / piv;
        for i in 0..self.m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;
        let pivot_row: Vec<f64> = self.binv[r].iter().map(|v| v / piv).collect();
        for i in 0..self.m {
            if i != r && u[i] != 0.0 {
                let f = u[i];
                for (a, p) in self.binv[i].iter_mut().zip(&pivot_row) {
                    *a -= f * p;
                }
            }
        }
        self.binv[r] = pivot_row;
        self.in_basis[self.basis[r]] = false;
        self.in_basis[q] = true;
        self.basis[r] = q;
        self.iterations += 1;
        self.since_refactor += 1;
    }

    /// Pivots basic artificials (at level zero) out of the basis wherever a
    /// non-artificial column can replace them. Rows where none can are
    /// redundant and keep their artificial at zero.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.m {
            if self.kinds[self.basis[r]] != Kind::Artificial {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.cols.len() {
                if self.in_basis[j] || self.kinds[j] == Kind::Artificial {
                    continue;
                }
                let a: f64 = Self::dot(&self.binv[r], &self.cols[j]);
                if a.abs() > 1e-9 && best.is_none_or(|(_, v)| a.abs() > v.abs()) {
                    best = Some((j, a));
                }
            }
            if let Some((q, _)) = best {
                let u = self.ftran(&self.cols[q]);
                self.xb[r] = 0.0;
                self.pivot(r, q, &u);
            }
        }
    }

    fn refactor(&mut self) -> Result<(), LpError> {
        let m = self.m;
        // Gauss-Jordan on [B | I] with partial pivoting.
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|i| self.basis.iter().map(|&j| self.cols[j][i]).collect())
            .collect();
        let mut inv = identity(m);
        for k in 0..m {
            let p = (k..m)
                .max_by(|&x, &y| a[x][k].abs().total_cmp(&a[y][k].abs()))
                .unwrap();
            if a[p][k].abs() < 1e-13 {
                return Err(LpError::Stall {
                    iterations: self.iterations,
                    residual: f64::NAN,
                });
            }
            a.swap(k, p);
            inv.swap(k, p);
            let d = a[k][k];
            for v in a[k].iter_mut() {
                *v /= d;
            }
            for v in inv[k].iter_mut() {
                *v /= d;
            }
            for i in 0..m {
                if i != k && a[i][k] != 0.0 {
                    let f = a[i][k];
                    let (ak, ai) = if i < k {
                        let (lo, hi) = a.split_at_mut(k);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = a.split_at_mut(i);
                        (&lo[k], &mut hi[0])
                    };
                    for (x, y) in ai.iter_mut().zip(ak) {
                        *x -= f * y;
                    }
                    let (ik, ii) = if i < k {
                        let (lo, hi) = inv.split_at_mut(k);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = inv.split_at_mut(i);
                        (&lo[k], &mut hi[0])
                    };
                    for (x, y) in ii.iter_mut().zip(ik) {
                        *x -= f * y;
                    }
                }
            }
        }
        self.binv = inv;
        self.xb = self.ftran(&self.b.clone());
        for v in self.xb.iter_mut() {
            if v.abs() < 1e-13 {
                *v = 0.0;
            }
        }
        self.since_refactor = 0;
        Ok(())
    }

    fn worst_residual(&self) -> f64 {
        self.xb.iter().map(|v| (-v).max(0.0)).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use rand::Rng;

    fn assert_optimal_pair(m: &LpModel, s: &SimplexSolution) {
        assert!(m.primal_residual(&s.x) <= 1e-9);
        let d = s.dual_objective(m);
        assert!(
            (d - s.objective).abs() <= 1e-7 * (1.0 + s.objective.abs()),
            "primal {} dual {}",
            s.objective,
            d
        );
        // dual feasibility: reduced costs ≤ 0 for a maximisation
        for c in &m.columns {
            let red = c.obj - c.entries.iter().map(|&(i, a)| a * s.duals[i]).sum::<f64>();
            assert!(red <= 1e-7, "reduced cost {red}");
        }
        for (r, y) in m.rows.iter().zip(&s.duals) {
            match r.sense {
                Sense::Le => assert!(*y >= -1e-9),
                Sense::Ge => assert!(*y <= 1e-9),
                Sense::Eq => {}
            }
        }
    }

    #[test]
    fn one_by_one() {
        let mut m = LpModel::new();
        m.add_row(Sense::Le, 1.0, "cap");
        m.add_column(1.0, vec![(0, 1.0)], "x");
        let s = simplex_solve(&m).unwrap();
        assert_eq!(s.x, vec![1.0]);
        assert_eq!(s.duals, vec![1.0]);
    }

    #[test]
    fn textbook_lp() {
        // max 3x + 5y; x ≤ 4; 2y ≤ 12; 3x + 2y ≤ 18 → (2, 6), 36
        let mut m = LpModel::new();
        m.add_row(Sense::Le, 4.0, "a");
        m.add_row(Sense::Le, 12.0, "b");
        m.add_row(Sense::Le, 18.0, "c");
        m.add_column(3.0, vec![(0, 1.0), (2, 3.0)], "x");
        m.add_column(5.0, vec![(1, 2.0), (2, 2.0)], "y");
        let s = simplex_solve(&m).unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
        assert_optimal_pair(&m, &s);
    }

    #[test]
    fn redundant_equal_rows_terminate() {
        let mut m = LpModel::new();
        m.add_row(Sense::Eq, 1.0, "a");
        m.add_row(Sense::Eq, 1.0, "a again");
        m.add_row(Sense::Le, 1.0, "cap");
        m.add_column(1.0, vec![(0, 1.0), (1, 1.0), (2, 1.0)], "x");
        m.add_column(2.0, vec![(0, 1.0), (1, 1.0)], "y");
        let s = simplex_solve(&m).unwrap();
        assert!((s.objective - 2.0).abs() < 1e-12);
        assert_optimal_pair(&m, &s);
    }

    #[test]
    fn ge_rows_negative_rhs_and_infeasibility() {
        // max −x − y, x + y ≥ 2, −x ≤ −0.5 → −2
        let mut m = LpModel::new();
        m.add_row(Sense::Ge, 2.0, "a");
        m.add_row(Sense::Le, -0.5, "b");
        m.add_column(-1.0, vec![(0, 1.0), (1, -1.0)], "x");
        m.add_column(-1.0, vec![(0, 1.0)], "y");
        let s = simplex_solve(&m).unwrap();
        assert!((s.objective + 2.0).abs() < 1e-12);
        assert_optimal_pair(&m, &s);

        let mut bad = LpModel::new();
        bad.add_row(Sense::Le, 1.0, "a");
        bad.add_row(Sense::Ge, 2.0, "b");
        bad.add_column(1.0, vec![(0, 1.0), (1, 1.0)], "x");
        assert_eq!(simplex_solve(&bad), Err(LpError::Infeasible));

        let mut unb = LpModel::new();
        unb.add_row(Sense::Ge, 1.0, "a");
        unb.add_column(1.0, vec![(0, 1.0)], "x");
        assert_eq!(simplex_solve(&unb), Err(LpError::Unbounded));
    }

    #[test]
    fn degenerate_assignment_polytope() {
        // highly degenerate: 4x4 assignment with equal weights everywhere
        let k = 4;
        let mut m = LpModel::new();
        for i in 0..2 * k {
            m.add_row(Sense::Eq, 1.0, format!("r{i}"));
        }
        for i in 0..k {
            for j in 0..k {
                m.add_column(1.0, vec![(i, 1.0), (k + j, 1.0)], format!("x{i}{j}"));
            }
        }
        let s = simplex_solve(&m).unwrap();
        assert!((s.objective - k as f64).abs() < 1e-9);
        assert_optimal_pair(&m, &s);
    }

    #[test]
    fn random_packing_lps_have_matching_dual_certificates() {
        let mut r = rng::seeded(11);
        for _ in 0..200 {
            let rows = r.random_range(1..7);
            let cols = r.random_range(1..9);
            let mut m = LpModel::new();
            for i in 0..rows {
                let sense = if r.random_bool(0.2) { Sense::Eq } else { Sense::Le };
                m.add_row(sense, r.random_range(0.5..3.0), format!("r{i}"));
            }
            for j in 0..cols {
                let mut e: Vec<(usize, f64)> = Vec::new();
                for i in 0..rows {
                    if r.random_bool(0.6) {
                        e.push((i, r.random_range(0.1..2.0)));
                    }
                }
                m.add_column(r.random_range(-1.0..2.0), e, format!("x{j}"));
            }
            // a slack-like column per equality row keeps things feasible
            for i in 0..rows {
                if m.rows[i].sense == Sense::Eq {
                    m.add_column(0.0, vec![(i, 1.0)], "fill");
                }
            }
            match simplex_solve(&m) {
                Ok(s) => assert_optimal_pair(&m, &s),
                Err(LpError::Unbounded) => {
                    // only possible when some column has no entries and positive objective
                    assert!(m.columns.iter().any(|c| c.entries.is_empty() && c.obj > 0.0));
                }
                Err(e) => panic!("{e}"),
            }
        }
    }
}

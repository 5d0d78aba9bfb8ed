//! Sparse LP container and its text dump format.
//!
//! All models are maximisation problems over non-negative variables:
//!
//! ```text
//! maximize   Σ_j obj_j x_j
//! subject to Σ_j a_ij x_j  (≤ | = | ≥)  rhs_i
//!            x ≥ 0
//! ```
//!
//! The dump format is line oriented. Reals are written with Rust's
//! shortest round-trip representation, so `load(dump(m)) == m` bit for bit.
//!
//! ```text
//! lp-model v1
//! rows <m>
//! row <i> <le|eq|ge> <rhs> <label>
//! columns <n>
//! col <j> <obj> <label>
//! coef <i> <j> <value>
//! end
//! ```
//!
//! Labels run to the end of the line and may contain spaces. Column labels of
//! configuration LPs carry their metadata, e.g. `x[slot=3 i=1 b=0 s=(0,2)]`.

use std::fmt::Write as _;

use super::LpError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    fn token(self) -> &'static str {
        match self {
            Sense::Le => "le",
            Sense::Eq => "eq",
            Sense::Ge => "ge",
        }
    }

    fn parse(s: &str) -> Option<Sense> {
        match s {
            "le" => Some(Sense::Le),
            "eq" => Some(Sense::Eq),
            "ge" => Some(Sense::Ge),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub sense: Sense,
    pub rhs: f64,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub obj: f64,
    /// `(row, coefficient)` pairs, rows strictly increasing.
    pub entries: Vec<(usize, f64)>,
    pub label: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpModel {
    pub rows: Vec<Row>,
    pub columns: Vec<Column>,
}

impl LpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_row(&mut self, sense: Sense, rhs: f64, label: impl Into<String>) -> usize {
        self.rows.push(Row {
            sense,
            rhs,
            label: label.into(),
        });
        self.rows.len() - 1
    }

    /// Adds a column; zero coefficients are dropped and duplicate rows summed.
    pub fn add_column(
        &mut self,
        obj: f64,
        entries: impl IntoIterator<Item = (usize, f64)>,
        label: impl Into<String>,
    ) -> usize {
        let mut e: Vec<(usize, f64)> = entries.into_iter().collect();
        e.sort_by_key(|&(r, _)| r);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(e.len());
        for (r, v) in e {
            match merged.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0.0);
        self.columns.push(Column {
            obj,
            entries: merged,
            label: label.into(),
        });
        self.columns.len() - 1
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    /// `Σ_j a_ij x_j` for every row.
    pub fn row_activity(&self, x: &[f64]) -> Vec<f64> {
        let mut act = vec![0.0; self.rows.len()];
        for (c, &xj) in self.columns.iter().zip(x) {
            if xj != 0.0 {
                for &(r, a) in &c.entries {
                    act[r] += a * xj;
                }
            }
        }
        act
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.columns.iter().zip(x).map(|(c, &xj)| c.obj * xj).sum()
    }

    /// Largest violation of a row or of `x ≥ 0`.
    pub fn primal_residual(&self, x: &[f64]) -> f64 {
        let act = self.row_activity(x);
        let mut worst = x.iter().map(|&v| (-v).max(0.0)).fold(0.0, f64::max);
        for (row, a) in self.rows.iter().zip(act) {
            let r = match row.sense {
                Sense::Le => (a - row.rhs).max(0.0),
                Sense::Ge => (row.rhs - a).max(0.0),
                Sense::Eq => (a - row.rhs).abs(),
            };
            worst = worst.max(r);
        }
        worst
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        writeln!(s, "lp-model v1").unwrap();
        writeln!(s, "rows {}", self.rows.len()).unwrap();
        for (i, r) in self.rows.iter().enumerate() {
            writeln!(s, "row {} {} {:?} {}", i, r.sense.token(), r.rhs, r.label).unwrap();
        }
        writeln!(s, "columns {}", self.columns.len()).unwrap();
        for (j, c) in self.columns.iter().enumerate() {
            writeln!(s, "col {} {:?} {}", j, c.obj, c.label).unwrap();
        }
        for (j, c) in self.columns.iter().enumerate() {
            for &(i, v) in &c.entries {
                writeln!(s, "coef {} {} {:?}", i, j, v).unwrap();
            }
        }
        writeln!(s, "end").unwrap();
        s
    }

    pub fn load(text: &str) -> Result<LpModel, LpError> {
        let bad = |line: usize, msg: &str| LpError::Format(format!("line {}: {}", line + 1, msg));
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "lp-model v1")) => {}
            _ => return Err(bad(0, "expected header `lp-model v1`")),
        }
        let mut m = LpModel::new();
        let mut ended = false;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(2, ' ');
            let kind = parts.next().unwrap_or("");
            let rest = parts.next().unwrap_or("");
            match kind {
                "rows" | "columns" => {}
                "row" => {
                    let f: Vec<&str> = rest.splitn(4, ' ').collect();
                    if f.len() < 3 {
                        return Err(bad(ln, "row needs index, sense and rhs"));
                    }
                    let idx: usize = f[0].parse().map_err(|_| bad(ln, "bad row index"))?;
                    if idx != m.rows.len() {
                        return Err(bad(ln, "rows must be listed in order"));
                    }
                    let sense = Sense::parse(f[1]).ok_or_else(|| bad(ln, "bad sense"))?;
                    let rhs: f64 = f[2].parse().map_err(|_| bad(ln, "bad rhs"))?;
                    m.add_row(sense, rhs, f.get(3).copied().unwrap_or(""));
                }
                "col" => {
                    let f: Vec<&str> = rest.splitn(3, ' ').collect();
                    if f.len() < 2 {
                        return Err(bad(ln, "col needs index and objective"));
                    }
                    let idx: usize = f[0].parse().map_err(|_| bad(ln, "bad column index"))?;
                    if idx != m.columns.len() {
                        return Err(bad(ln, "columns must be listed in order"));
                    }
                    let obj: f64 = f[1].parse().map_err(|_| bad(ln, "bad objective"))?;
                    m.columns.push(Column {
                        obj,
                        entries: Vec::new(),
                        label: f.get(2).copied().unwrap_or("").to_string(),
                    });
                }
                "coef" => {
                    let f: Vec<&str> = rest.split(' ').collect();
                    if f.len() != 3 {
                        return Err(bad(ln, "coef needs row, column and value"));
                    }
                    let i: usize = f[0].parse().map_err(|_| bad(ln, "bad row"))?;
                    let j: usize = f[1].parse().map_err(|_| bad(ln, "bad column"))?;
                    let v: f64 = f[2].parse().map_err(|_| bad(ln, "bad value"))?;
                    if i >= m.rows.len() || j >= m.columns.len() {
                        return Err(bad(ln, "coefficient outside the model"));
                    }
                    let e = &mut m.columns[j].entries;
                    if e.last().is_some_and(|&(r, _)| r >= i) {
                        return Err(bad(ln, "coefficients of a column must have increasing rows"));
                    }
                    e.push((i, v));
                }
                "end" => {
                    ended = true;
                    break;
                }
                _ => return Err(bad(ln, "unknown record")),
            }
        }
        if !ended {
            return Err(LpError::Format("missing `end`".into()));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_column_merges_and_drops_zeros() {
        let mut m = LpModel::new();
        m.add_row(Sense::Le, 1.0, "a");
        m.add_row(Sense::Eq, 2.0, "b");
        m.add_column(1.0, vec![(1, 0.5), (0, 0.0), (1, 0.25)], "x");
        assert_eq!(m.columns[0].entries, vec![(1, 0.75)]);
    }

    #[test]
    fn load_rejects_garbage() {
        assert!(LpModel::load("nope").is_err());
        assert!(LpModel::load("lp-model v1\nrow 0 lt 1 r\nend\n").is_err());
        assert!(LpModel::load("lp-model v1\nrows 0\n").is_err());
    }

    proptest! {
        #[test]
        fn dump_load_round_trip(
            rows in prop::collection::vec((0u8..3, -1e3f64..1e3), 0..6),
            cols in prop::collection::vec((-1e3f64..1e3, prop::collection::vec((0usize..6, -10.0f64..10.0), 0..5)), 0..8),
        ) {
            let mut m = LpModel::new();
            for (k, (s, rhs)) in rows.iter().enumerate() {
                let sense = [Sense::Le, Sense::Eq, Sense::Ge][*s as usize];
                m.add_row(sense, *rhs, format!("r {k}"));
            }
            for (j, (obj, entries)) in cols.iter().enumerate() {
                let e: Vec<(usize, f64)> = entries
                    .iter()
                    .filter(|(r, _)| *r < m.num_rows())
                    .cloned()
                    .collect();
                m.add_column(*obj, e, format!("x[{j}] meta"));
            }
            let back = LpModel::load(&m.dump()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}

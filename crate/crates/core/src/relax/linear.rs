use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Which family of conditions a row encodes; level-2 rows are regenerated per box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowOrigin {
    VertexSum,
    AngleBound,
    Triangle,
    Quad,
    QuadWindow,
    Pentagon,
    Hexagon,
    IsolatedHexagon,
    Level2,
    Other,
}

/// `lo <= sum coeffs[k].1 * x[coeffs[k].0] <= hi`; either side may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub lo: f64,
    pub hi: f64,
    pub origin: RowOrigin,
}

impl Row {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let v = self.eval(x);
        (self.lo - v).max(v - self.hi).max(0.0)
    }
}

/// Linear constraints over a box. Invariant: every row references only
/// declared variables; `lo[j] > hi[j]` marks the relaxation empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRelaxation {
    pub names: Vec<String>,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub rows: Vec<Row>,
}

impl LinearRelaxation {
    pub fn new(names: Vec<String>, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(names.len(), lo.len());
        assert_eq!(names.len(), hi.len());
        Self { names, lo, hi, rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.lo.len()
    }

    pub fn add(&mut self, coeffs: Vec<(usize, f64)>, rel: Relation, rhs: f64, origin: RowOrigin) {
        let (lo, hi) = match rel {
            Relation::Eq => (rhs, rhs),
            Relation::Le => (f64::NEG_INFINITY, rhs),
            Relation::Ge => (rhs, f64::INFINITY),
        };
        self.add_range(coeffs, lo, hi, origin);
    }

    pub fn add_range(&mut self, mut coeffs: Vec<(usize, f64)>, lo: f64, hi: f64, origin: RowOrigin) {
        let n = self.num_vars();
        assert!(coeffs.iter().all(|&(j, _)| j < n), "row references undeclared variable");
        coeffs.sort_by_key(|c| c.0);
        // merge repeated indices
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            match merged.last_mut() {
                Some(l) if l.0 == j => l.1 += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|c| c.1 != 0.0);
        self.rows.push(Row { coeffs: merged, lo, hi, origin });
    }

    /// Intersects the box of variable `j` with `[lo, hi]`.
    pub fn restrict(&mut self, j: usize, lo: f64, hi: f64) {
        self.lo[j] = self.lo[j].max(lo);
        self.hi[j] = self.hi[j].min(hi);
    }

    pub fn box_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }

    pub fn width(&self, j: usize) -> f64 {
        self.hi[j] - self.lo[j]
    }

    /// Largest row or box violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(x)).fold(0.0, f64::max);
        let bx = (0..self.num_vars())
            .map(|j| (self.lo[j] - x[j]).max(x[j] - self.hi[j]).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bx)
    }

    pub fn without_origin(&self, origin: RowOrigin) -> Self {
        let mut r = self.clone();
        r.rows.retain(|row| row.origin != origin);
        r
    }

    /// Objective-free dump: bounds, then one constraint per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vars {}", self.num_vars());
        for j in 0..self.num_vars() {
            let _ = writeln!(s, "bound {:.17e} <= {} <= {:.17e}", self.lo[j], self.names[j], self.hi[j]);
        }
        for r in &self.rows {
            let mut lhs = String::new();
            for (k, &(j, a)) in r.coeffs.iter().enumerate() {
                let sign = if a < 0.0 { "-" } else if k > 0 { "+" } else { "" };
                let _ = write!(lhs, "{}{} {:.17e} {}", if k > 0 { " " } else { "" }, sign, a.abs(), self.names[j]);
            }
            let tag = serde_json::to_string(&r.origin).unwrap_or_default();
            if r.lo == r.hi {
                let _ = writeln!(s, "{lhs} = {:.17e} # {tag}", r.lo);
            } else {
                if r.lo.is_finite() {
                    let _ = writeln!(s, "{lhs} >= {:.17e} # {tag}", r.lo);
                }
                if r.hi.is_finite() {
                    let _ = writeln!(s, "{lhs} <= {:.17e} # {tag}", r.hi);
                }
            }
        }
        s
    }
}

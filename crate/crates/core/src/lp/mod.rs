//! Dense LP engine: feasibility, optimisation, and per-variable bound tightening
//! over a [`LinearRelaxation`].
//!
//! Infeasibility is only reported with a Farkas multiplier vector that has been
//! re-verified by interval evaluation, and tightened bounds come from the
//! Lagrangian bound of the final row multipliers, so both outcomes are checked
//! independently of the pivoting.

mod presolve;
mod simplex;

pub use simplex::FEAS_TOL;

use crate::relax::LinearRelaxation;
use serde::{Deserialize, Serialize};
use simplex::{PhaseEnd, Simplex};

/// Witness violations above this turn an optimum into a numerical failure.
pub const WITNESS_TOL: f64 = 1e-8;
/// Minimum normalised Farkas gap accepted as proof of infeasibility.
pub const FARKAS_GAP: f64 = 1e-9;
/// Multipliers below this magnitude are dropped before certificate checks.
const DUAL_ZERO: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub value: Option<f64>,
    pub witness: Option<Vec<f64>>,
    /// Row multipliers proving infeasibility.
    pub farkas: Option<Vec<f64>>,
    /// Certified bound on the objective in the optimisation direction.
    pub dual_bound: Option<f64>,
    pub iterations: usize,
}

impl LpOutcome {
    fn bare(status: LpStatus, iterations: usize) -> Self {
        Self { status, value: None, witness: None, farkas: None, dual_bound: None, iterations }
    }
}

/// Range of `sum_i y_i (a_i x - s_i)` over the box and the row ranges.
fn multiplier_range(relax: &LinearRelaxation, y: &[f64]) -> (f64, f64) {
    let n = relax.num_vars();
    let mut coef = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, 0.0);
    for (row, &yi) in relax.rows.iter().zip(y) {
        if yi == 0.0 {
            continue;
        }
        for &(j, a) in &row.coeffs {
            coef[j] += yi * a;
        }
        // -y_i s_i over s_i in [row.lo, row.hi]
        let (a, b) = (-yi * row.lo, -yi * row.hi);
        lo += a.min(b);
        hi += a.max(b);
    }
    for j in 0..n {
        let (a, b) = (coef[j] * relax.lo[j], coef[j] * relax.hi[j]);
        lo += a.min(b);
        hi += a.max(b);
    }
    (lo, hi)
}

fn clean(y: &[f64]) -> Vec<f64> {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return y.to_vec();
    }
    y.iter()
        .map(|&v| if v.abs() < DUAL_ZERO * scale.max(1.0) { 0.0 } else { v / scale })
        .collect()
}

/// Normalised distance of zero from the range of `y . (A x - s)`; positive values
/// prove the relaxation infeasible.
pub fn farkas_gap(relax: &LinearRelaxation, y: &[f64]) -> f64 {
    let y = clean(y);
    if y.iter().all(|&v| v == 0.0) {
        return f64::NEG_INFINITY;
    }
    let (lo, hi) = multiplier_range(relax, &y);
    if lo.is_nan() || hi.is_nan() {
        return f64::NEG_INFINITY;
    }
    lo.max(-hi)
}

/// `min over box of c.x - y.(A x - s)`: a valid lower bound on `min c.x` for any `y`.
pub fn lagrangian_bound(relax: &LinearRelaxation, c: &[f64], y: &[f64]) -> f64 {
    let n = relax.num_vars();
    let mut coef = c.to_vec();
    let mut total = 0.0;
    for (row, &yi) in relax.rows.iter().zip(y) {
        if yi.abs() < DUAL_ZERO {
            continue;
        }
        for &(j, a) in &row.coeffs {
            coef[j] -= yi * a;
        }
        // + y_i s_i minimised over the row range
        let (a, b) = (yi * row.lo, yi * row.hi);
        let m = a.min(b);
        if m.is_nan() {
            return f64::NEG_INFINITY;
        }
        total += m;
    }
    for j in 0..n {
        let (a, b) = (coef[j] * relax.lo[j], coef[j] * relax.hi[j]);
        total += a.min(b);
    }
    if total.is_nan() {
        f64::NEG_INFINITY
    } else {
        total
    }
}

/// Simplex state reusable across objectives (warm start from the last basis).
pub struct LpSolver<'a> {
    relax: &'a LinearRelaxation,
    spx: Simplex,
    feasible: Option<bool>,
}

impl<'a> LpSolver<'a> {
    pub fn new(relax: &'a LinearRelaxation) -> Self {
        Self { relax, spx: Simplex::new(relax), feasible: None }
    }

    /// Phase 1. `Infeasible` carries a verified certificate.
    pub fn feasibility(&mut self) -> LpOutcome {
        if self.relax.box_empty() {
            let mut o = LpOutcome::bare(LpStatus::Infeasible, 0);
            o.farkas = Some(vec![0.0; self.relax.rows.len()]);
            return o;
        }
        match self.spx.run() {
            PhaseEnd::Optimal => {}
            _ => return LpOutcome::bare(LpStatus::NumericalFailure, self.spx.iterations),
        }
        let w = self.spx.infeasibility();
        if w <= FEAS_TOL * (1.0 + self.spx.num_rows() as f64).sqrt() {
            self.feasible = Some(true);
            let mut o = LpOutcome::bare(LpStatus::Optimal, self.spx.iterations);
            o.witness = Some(self.spx.structural());
            return o;
        }
        let y = self.spx.duals(self.relax.rows.len());
        if farkas_gap(self.relax, &y) > FARKAS_GAP {
            self.feasible = Some(false);
            let mut o = LpOutcome::bare(LpStatus::Infeasible, self.spx.iterations);
            o.farkas = Some(y);
            o
        } else {
            LpOutcome::bare(LpStatus::NumericalFailure, self.spx.iterations)
        }
    }

    /// Optimises `objective` from the current basis, running phase 1 first if needed.
    pub fn optimize(&mut self, objective: &[f64], sense: Sense) -> LpOutcome {
        assert_eq!(objective.len(), self.relax.num_vars());
        if self.feasible.is_none() {
            let f = self.feasibility();
            if f.status != LpStatus::Optimal {
                return f;
            }
        }
        if self.feasible == Some(false) {
            return LpOutcome::bare(LpStatus::Infeasible, self.spx.iterations);
        }
        let c: Vec<f64> = match sense {
            Sense::Min => objective.to_vec(),
            Sense::Max => objective.iter().map(|v| -v).collect(),
        };
        self.spx.set_objective(&c);
        match self.spx.run() {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => return LpOutcome::bare(LpStatus::Unbounded, self.spx.iterations),
            PhaseEnd::IterationCap => {
                return LpOutcome::bare(LpStatus::NumericalFailure, self.spx.iterations)
            }
        }
        let x = self.spx.structural();
        if self.relax.max_violation(&x) > WITNESS_TOL {
            return LpOutcome::bare(LpStatus::NumericalFailure, self.spx.iterations);
        }
        let y = self.spx.duals(self.relax.rows.len());
        let lb = lagrangian_bound(self.relax, &c, &y);
        let primal: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        let mut o = LpOutcome::bare(LpStatus::Optimal, self.spx.iterations);
        let sign = if sense == Sense::Min { 1.0 } else { -1.0 };
        o.value = Some(sign * primal);
        o.witness = Some(x);
        o.dual_bound = lb.is_finite().then_some(sign * lb);
        o
    }
}

/// One-shot solve.
pub fn solve(relax: &LinearRelaxation, objective: &[f64], sense: Sense) -> LpOutcome {
    LpSolver::new(relax).optimize(objective, sense)
}

#[derive(Debug, Clone, PartialEq)]
pub enum TightenResult {
    Tightened { relax: LinearRelaxation, failures: usize, max_change: f64 },
    Infeasible { farkas: Vec<f64> },
}

/// Bounds that move by less than this are left untouched.
const TIGHTEN_EPS: f64 = 1e-12;
/// A witness this close to a bound shows that bound cannot tighten.
const ATTAINED_TOL: f64 = 1e-10;

/// Minimises and maximises every variable. New bounds are the certified dual
/// bounds, so a numerically poor optimum can only leave a bound looser.
/// Runs on the presolved system; a bound already attained by some earlier
/// optimal vertex is not re-optimised. An infeasibility certificate refers to
/// the rows of `relax`.
pub fn tighten_box(relax: &LinearRelaxation) -> TightenResult {
    let pre = presolve::presolve(relax);
    if pre.relax.box_empty() {
        let f = LpSolver::new(relax).feasibility();
        return match f.status {
            LpStatus::Infeasible => TightenResult::Infeasible { farkas: f.farkas.unwrap_or_default() },
            _ => TightenResult::Tightened { relax: relax.clone(), failures: 1, max_change: 0.0 },
        };
    }
    let red = &pre.relax;
    let n = red.num_vars();
    let mut solver = LpSolver::new(red);
    let f = solver.feasibility();
    let mut lo = red.lo.clone();
    let mut hi = red.hi.clone();
    let mut failures = 0;
    match f.status {
        // certificates are reported against the caller's rows, not the reduced ones
        LpStatus::Infeasible => {
            let g = LpSolver::new(relax).feasibility();
            return match g.status {
                LpStatus::Infeasible => TightenResult::Infeasible { farkas: g.farkas.unwrap_or_default() },
                _ => TightenResult::Tightened { relax: relax.clone(), failures: 1, max_change: 0.0 },
            };
        }
        LpStatus::Optimal => {}
        _ => failures = 2 * n,
    }
    let mut at_lo = vec![false; n];
    let mut at_hi = vec![false; n];
    let mark = |x: &[f64], at_lo: &mut [bool], at_hi: &mut [bool], lo: &[f64], hi: &[f64]| {
        for j in 0..n {
            at_lo[j] |= x[j] <= lo[j] + ATTAINED_TOL;
            at_hi[j] |= x[j] >= hi[j] - ATTAINED_TOL;
        }
    };
    if let Some(x) = &f.witness {
        mark(x, &mut at_lo, &mut at_hi, &lo, &hi);
    }
    let mut obj = vec![0.0; n];
    for j in 0..n {
        if failures > 0 {
            break;
        }
        obj[j] = 1.0;
        for sense in [Sense::Min, Sense::Max] {
            let attained = match sense {
                Sense::Min => at_lo[j],
                Sense::Max => at_hi[j],
            };
            if attained {
                continue;
            }
            let o = solver.optimize(&obj, sense);
            match (o.status, o.dual_bound) {
                (LpStatus::Optimal, Some(b)) => {
                    let b = b - sense_sign(sense) * 1e-12 * (1.0 + b.abs());
                    match sense {
                        Sense::Min if b > lo[j] + TIGHTEN_EPS => lo[j] = b,
                        Sense::Max if b < hi[j] - TIGHTEN_EPS => hi[j] = b,
                        _ => {}
                    }
                    if let Some(x) = &o.witness {
                        mark(x, &mut at_lo, &mut at_hi, &lo, &hi);
                    }
                }
                _ => failures += 1,
            }
        }
        obj[j] = 0.0;
    }
    for j in 0..n {
        if lo[j] > hi[j] {
            if lo[j] - hi[j] < 1e-9 {
                let m = 0.5 * (lo[j] + hi[j]);
                lo[j] = m;
                hi[j] = m;
            } else {
                // phase 1 found the system feasible, so a wide crossing is numerical noise
                return TightenResult::Tightened { relax: relax.clone(), failures: failures + 1, max_change: 0.0 };
            }
        }
    }
    let mut out = relax.clone();
    let mut max_change: f64 = 0.0;
    for (j, &c) in pre.class.iter().enumerate() {
        if lo[c] > out.lo[j] + TIGHTEN_EPS {
            max_change = max_change.max(lo[c] - out.lo[j]);
            out.lo[j] = lo[c];
        }
        if hi[c] < out.hi[j] - TIGHTEN_EPS {
            max_change = max_change.max(out.hi[j] - hi[c]);
            out.hi[j] = hi[c];
        }
    }
    TightenResult::Tightened { relax: out, failures, max_change }
}

fn sense_sign(s: Sense) -> f64 {
    match s {
        Sense::Min => 1.0,
        Sense::Max => -1.0,
    }
}

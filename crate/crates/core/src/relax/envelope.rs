//! Sampled linear envelopes, whole-box condition tests and grid contraction
//! for the nonlinear face relations. Functions are evaluated on a uniform grid
//! and bounds are widened by the interpolation error of the grid, estimated
//! from second differences along each axis and doubled. On an axis with only
//! two nodes the first difference is used instead.

/// `f(x) - (value + grad . (x - centre))` lies in `[lo_err, hi_err]` on the box.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope {
    pub centre: Vec<f64>,
    pub value: f64,
    pub grad: Vec<f64>,
    pub lo_err: f64,
    pub hi_err: f64,
}

impl Envelope {
    /// Constant term of the row `y - grad . x in [lo, hi]`.
    pub fn row_range(&self) -> (f64, f64) {
        let c = self.value - self.grad.iter().zip(&self.centre).map(|(g, x)| g * x).sum::<f64>();
        (c + self.lo_err, c + self.hi_err)
    }
}

const ABS_MARGIN: f64 = 1e-10;

fn axes(lo: &[f64], hi: &[f64], q: &[usize]) -> Vec<Vec<f64>> {
    (0..lo.len())
        .map(|i| {
            if hi[i] <= lo[i] || q[i] <= 1 {
                vec![lo[i]]
            } else {
                (0..q[i]).map(|t| lo[i] + (hi[i] - lo[i]) * t as f64 / (q[i] - 1) as f64).collect()
            }
        })
        .collect()
}

fn nodes(lo: &[f64], hi: &[f64], q: usize) -> Vec<Vec<f64>> {
    product(&axes(lo, hi, &vec![q; lo.len()]))
}

fn product(axis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::with_capacity(axis.len())];
    for a in axis {
        out = out
            .into_iter()
            .flat_map(|p| {
                a.iter().map(move |&v| {
                    let mut p = p.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

fn dims(lo: &[f64], hi: &[f64], q: usize) -> Vec<usize> {
    lo.iter().zip(hi).map(|(l, h)| if h <= l || q == 1 { 1 } else { q }).collect()
}

/// Doubled interpolation error bound for grid values laid out with the last axis innermost.
/// Entries that are NaN are skipped.
fn interpolation_margin(vals: &[f64], dims: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut stride = 1;
    for &len in dims.iter().rev() {
        let mut worst: f64 = 0.0;
        for idx in 0..vals.len() {
            let pos = (idx / stride) % len;
            if len == 2 && pos == 0 {
                worst = worst.max((vals[idx + stride] - vals[idx]).abs());
            } else if len >= 3 && pos + 2 < len {
                let s2 = vals[idx] - 2.0 * vals[idx + stride] + vals[idx + 2 * stride];
                worst = worst.max(s2.abs() / 4.0);
            }
        }
        total += worst;
        stride *= len;
    }
    total
}

/// Envelopes of each output of `f` over the box. `None` if `f` is undefined anywhere it is probed.
pub fn envelopes(
    lo: &[f64],
    hi: &[f64],
    q: usize,
    f: impl Fn(&[f64]) -> Option<Vec<f64>>,
) -> Option<Vec<Envelope>> {
    let k = lo.len();
    let centre: Vec<f64> = lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect();
    let c_val = f(&centre)?;
    let p = c_val.len();
    let mut grad = vec![vec![0.0; k]; p];
    for i in 0..k {
        let h = 0.25 * (hi[i] - lo[i]);
        if h <= 0.0 {
            continue;
        }
        let mut a = centre.clone();
        let mut b = centre.clone();
        a[i] -= h;
        b[i] += h;
        let (fa, fb) = (f(&a)?, f(&b)?);
        for j in 0..p {
            grad[j][i] = (fb[j] - fa[j]) / (2.0 * h);
        }
    }
    let pts = nodes(lo, hi, q);
    let shape = dims(lo, hi, q);
    let mut resid = vec![Vec::with_capacity(pts.len()); p];
    for x in &pts {
        let v = f(x)?;
        for j in 0..p {
            let lin: f64 = (0..k).map(|i| grad[j][i] * (x[i] - centre[i])).sum();
            resid[j].push(v[j] - c_val[j] - lin);
        }
    }
    let mut out = Vec::with_capacity(p);
    for j in 0..p {
        let r = &resid[j];
        if r.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let margin = interpolation_margin(r, &shape) + ABS_MARGIN * (1.0 + c_val[j].abs());
        let (mn, mx) = r.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
        out.push(Envelope {
            centre: centre.clone(),
            value: c_val[j],
            grad: grad[j].clone(),
            lo_err: mn - margin,
            hi_err: mx + margin,
        });
    }
    Some(out)
}

/// Certified-by-sampling lower bounds of each output of `g` over the box.
/// A positive entry means that output is positive everywhere on the box.
pub fn lower_bounds(
    lo: &[f64],
    hi: &[f64],
    q: usize,
    g: impl Fn(&[f64]) -> Option<Vec<f64>>,
) -> Option<Vec<f64>> {
    let pts = nodes(lo, hi, q);
    let shape = dims(lo, hi, q);
    let mut vals: Vec<Vec<f64>> = Vec::new();
    for x in &pts {
        let v = g(x)?;
        if vals.is_empty() {
            vals = vec![Vec::with_capacity(pts.len()); v.len()];
        }
        for (col, &y) in vals.iter_mut().zip(&v) {
            col.push(y);
        }
    }
    vals.iter()
        .map(|col| {
            if col.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let mn = col.iter().copied().fold(f64::INFINITY, f64::min);
            Some(mn - interpolation_margin(col, &shape) - ABS_MARGIN)
        })
        .collect()
}

/// Result of [`contract`].
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction {
    /// No grid cell can hold a point where every component is `<= 0`.
    Empty,
    /// Hull of the cells that may.
    Hull(Vec<(f64, f64)>),
}

/// Shrinks a box to the grid cells that may contain a point with all components
/// of `g` nonpositive. Each cell is kept unless some component's smallest corner
/// value exceeds that component's interpolation margin. Cells touching an
/// undefined node are kept.
pub fn contract(lo: &[f64], hi: &[f64], q: &[usize], g: impl Fn(&[f64]) -> Option<Vec<f64>>) -> Contraction {
    let axis = axes(lo, hi, q);
    let shape: Vec<usize> = axis.iter().map(Vec::len).collect();
    let pts = product(&axis);
    let vals: Vec<Option<Vec<f64>>> = pts.iter().map(|x| g(x).filter(|v| v.iter().all(|y| y.is_finite()))).collect();
    let ncomp = vals.iter().flatten().map(Vec::len).next().unwrap_or(0);
    let margins: Vec<f64> = (0..ncomp)
        .map(|c| {
            let col: Vec<f64> = vals.iter().map(|v| v.as_ref().map_or(f64::NAN, |v| v[c])).collect();
            interpolation_margin(&col, &shape) + ABS_MARGIN
        })
        .collect();
    let k = shape.len();
    let mut strides = vec![1; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    let cells: Vec<usize> = shape.iter().map(|&n| n.saturating_sub(1).max(1)).collect();
    let total: usize = cells.iter().product();
    let mut hull: Option<Vec<(f64, f64)>> = None;
    let mut idx = vec![0; k];
    for _ in 0..total {
        let base: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
        let mut corners = vec![base];
        for i in 0..k {
            if shape[i] > 1 {
                let more: Vec<usize> = corners.iter().map(|c| c + strides[i]).collect();
                corners.extend(more);
            }
        }
        let undefined = corners.iter().any(|&c| vals[c].is_none());
        let excluded = !undefined
            && (0..ncomp).any(|c| {
                let mn = corners.iter().map(|&n| vals[n].as_ref().map_or(f64::NAN, |v| v[c])).fold(f64::INFINITY, f64::min);
                mn - margins[c] > 0.0
            });
        if !excluded {
            let ext: Vec<(f64, f64)> = (0..k)
                .map(|i| {
                    let a = axis[i][idx[i]];
                    (a, if shape[i] > 1 { axis[i][idx[i] + 1] } else { a })
                })
                .collect();
            hull = Some(match hull {
                None => ext,
                Some(h) => h.iter().zip(&ext).map(|(a, b)| (a.0.min(b.0), a.1.max(b.1))).collect(),
            });
        }
        for i in (0..k).rev() {
            idx[i] += 1;
            if idx[i] < cells[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    match hull {
        None => Contraction::Empty,
        // the last axis nodes sit exactly on the box edges, so the hull stays inside it
        Some(h) => Contraction::Hull(h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_function_has_tight_envelope() {
        let env = envelopes(&[0.0, 1.0], &[1.0, 2.0], 3, |x| Some(vec![2.0 * x[0] - x[1] + 0.5])).unwrap();
        let e = &env[0];
        assert!((e.grad[0] - 2.0).abs() < 1e-12 && (e.grad[1] + 1.0).abs() < 1e-12);
        assert!(e.lo_err.abs() < 1e-9 && e.hi_err.abs() < 1e-9);
    }

    #[test]
    fn degenerate_axis_is_sampled_once() {
        assert_eq!(nodes(&[0.0, 1.0], &[1.0, 1.0], 4).len(), 4);
    }

    #[test]
    fn margin_is_per_axis() {
        // 2x2 grid, values indexed [x0][x1]
        let v = [0.0, 1.0, 3.0, 4.0];
        assert!((interpolation_margin(&v, &[2, 2]) - 4.0).abs() < 1e-15);
        // x0^2 on three nodes with unit spacing: second difference 2
        assert!((interpolation_margin(&[0.0, 1.0, 4.0], &[3]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn contract_keeps_the_feasible_part() {
        // x^2 + y^2 <= 1 inside [-3, 3]^2
        let c = contract(&[-3.0, -3.0], &[3.0, 3.0], &[13, 13], |x| Some(vec![x[0] * x[0] + x[1] * x[1] - 1.0]));
        let Contraction::Hull(h) = c else { panic!("disk is nonempty") };
        for (a, b) in h {
            assert!(a <= -1.0 && a >= -2.0 && b >= 1.0 && b <= 2.0, "({a}, {b})");
        }
        let e = contract(&[2.0], &[3.0], &[5], |x| Some(vec![x[0] - 1.5]));
        assert_eq!(e, Contraction::Empty);
    }

    #[test]
    fn lower_bound_detects_positive_function() {
        let b = lower_bounds(&[1.0], &[2.0], 5, |x| Some(vec![x[0] * x[0], x[0] - 1.5])).unwrap();
        assert!(b[0] > 0.0 && b[0] <= 1.0);
        assert!(b[1] < -0.5);
    }
}

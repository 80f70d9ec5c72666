//! Independent oracles shared by the unit-level tests and the acceptance run.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use tammes::geom::{angular_dist, HexagonSolution, SphericalPoint};
use tammes::lp::Sense;
use tammes::relax::{LinearRelaxation, RowOrigin};

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Lambda by walking each circle of radius `d` around a corner in steps of
/// `h` radians and taking the sample just past every crossing of a second
/// corner's circle. Never looks at circle-intersection formulas.
pub fn lambda_by_walk(sol: &HexagonSolution, h: f64) -> f64 {
    let v: Vec<[f64; 3]> = sol.vertices.iter().map(|p| p.to_array()).collect();
    let d = sol.d;
    let mut best = f64::NEG_INFINITY;
    for i in 0..6 {
        let c = v[i];
        let helper = if c[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let e1 = unit(cross(c, helper));
        let e2 = cross(c, e1);
        let at = |t: f64| {
            let (s, co) = t.sin_cos();
            SphericalPoint::normalize([
                d.cos() * c[0] + d.sin() * (co * e1[0] + s * e2[0]),
                d.cos() * c[1] + d.sin() * (co * e1[1] + s * e2[1]),
                d.cos() * c[2] + d.sin() * (co * e1[2] + s * e2[2]),
            ])
            .unwrap()
        };
        let steps = (2.0 * PI / h).ceil() as usize;
        let mut prev: Option<(SphericalPoint, Vec<f64>)> = None;
        for k in 0..=steps {
            let p = at(k as f64 * h);
            let dist: Vec<f64> = sol.vertices.iter().map(|&q| angular_dist(p, q)).collect();
            if let Some((_, pd)) = &prev {
                for j in 0..6 {
                    if j == i || (pd[j] - d).signum() == (dist[j] - d).signum() {
                        continue;
                    }
                    if !sol.contains(p.to_array()) {
                        continue;
                    }
                    let m = (0..6).filter(|&x| x != i && x != j).map(|x| dist[x]).fold(f64::INFINITY, f64::min);
                    best = best.max(m);
                }
            }
            prev = Some((p, dist));
        }
    }
    best
}

/// Dense Gaussian elimination with partial pivoting; `None` when singular.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c].abs() < 1e-10 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Best objective over the vertices of `{lo <= x <= hi, row.lo <= a x <= row.hi}`.
/// Every vertex fixes some variables at a bound and makes as many rows tight
/// as there are free variables.
pub fn vertex_oracle(r: &LinearRelaxation, c: &[f64], sense: Sense) -> Option<f64> {
    let n = r.num_vars();
    let m = r.rows.len();
    let dense: Vec<Vec<f64>> = r
        .rows
        .iter()
        .map(|row| {
            let mut v = vec![0.0; n];
            for &(j, a) in &row.coeffs {
                v[j] = a;
            }
            v
        })
        .collect();
    let feasible = |x: &[f64]| r.max_violation(x) <= 1e-9;
    let mut best: Option<f64> = None;
    let mut consider = |x: &[f64]| {
        if feasible(x) {
            let v: f64 = c.iter().zip(x).map(|(a, b)| a * b).sum();
            best = Some(match (best, sense) {
                (None, _) => v,
                (Some(b), Sense::Min) => b.min(v),
                (Some(b), Sense::Max) => b.max(v),
            });
        }
    };
    for k in 0..=m.min(n) {
        for_subsets(m, k, &mut |rows| {
            for side in 0..(1usize << k) {
                let rhs: Vec<f64> =
                    rows.iter().enumerate().map(|(t, &i)| if side >> t & 1 == 0 { r.rows[i].lo } else { r.rows[i].hi }).collect();
                if rhs.iter().any(|v| !v.is_finite()) {
                    continue;
                }
                for_subsets(n, k, &mut |free| {
                    let fixed: Vec<usize> = (0..n).filter(|j| !free.contains(j)).collect();
                    for at in 0..(1usize << fixed.len()) {
                        let mut x = vec![0.0; n];
                        for (t, &j) in fixed.iter().enumerate() {
                            x[j] = if at >> t & 1 == 0 { r.lo[j] } else { r.hi[j] };
                        }
                        let a: Vec<Vec<f64>> = rows.iter().map(|&i| free.iter().map(|&j| dense[i][j]).collect()).collect();
                        let b: Vec<f64> = rows
                            .iter()
                            .zip(&rhs)
                            .map(|(&i, &v)| v - fixed.iter().map(|&j| dense[i][j] * x[j]).sum::<f64>())
                            .collect();
                        if let Some(y) = if k == 0 { Some(vec![]) } else { solve_dense(a, b) } {
                            for (t, &j) in free.iter().enumerate() {
                                x[j] = y[t];
                            }
                            consider(&x);
                        }
                    }
                });
            }
        });
    }
    best
}

fn for_subsets(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::new(), f);
}

pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, m: usize) -> (LinearRelaxation, Vec<f64>) {
    let names = (0..n).map(|j| format!("x{j}")).collect();
    let lo: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..0.0)).collect();
    let hi: Vec<f64> = lo.iter().map(|l| l + rng.gen_range(0.5..3.0)).collect();
    let mut r = LinearRelaxation::new(names, lo, hi);
    for _ in 0..m {
        let k = rng.gen_range(1..=n.min(4));
        let coeffs: Vec<(usize, f64)> = (0..k).map(|_| (rng.gen_range(0..n), rng.gen_range(-1.0..1.0))).collect();
        let centre = rng.gen_range(-1.5..1.5);
        let (a, b) = match rng.gen_range(0..4) {
            0 => (centre, centre),
            1 => (f64::NEG_INFINITY, centre),
            2 => (centre, f64::INFINITY),
            _ => (centre, centre + rng.gen_range(0.0..1.0)),
        };
        r.add_range(coeffs, a, b, RowOrigin::Other);
    }
    let c = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (r, c)
}

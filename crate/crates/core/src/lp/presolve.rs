//! Exact reductions applied before bound tightening: variables tied by
//! `x_i - x_j = 0` are merged, single-variable rows become bounds, and rows
//! implied by the box are dropped. The reduced system has the same feasible
//! set projected onto the class representatives.

use crate::relax::LinearRelaxation;

pub(crate) struct Presolved {
    pub relax: LinearRelaxation,
    /// Reduced index of every original variable.
    pub class: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub(crate) fn presolve(r: &LinearRelaxation) -> Presolved {
    let n = r.num_vars();
    let mut parent: Vec<usize> = (0..n).collect();
    for row in &r.rows {
        if let [(i, a), (j, b)] = row.coeffs[..] {
            if row.lo == 0.0 && row.hi == 0.0 && a == -b {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for j in 0..n {
        let root = find(&mut parent, j);
        if class[root] == usize::MAX {
            class[root] = reps.len();
            reps.push(root);
        }
        class[j] = class[root];
    }
    let m = reps.len();
    let mut lo = vec![f64::NEG_INFINITY; m];
    let mut hi = vec![f64::INFINITY; m];
    for j in 0..n {
        let c = class[j];
        lo[c] = lo[c].max(r.lo[j]);
        hi[c] = hi[c].min(r.hi[j]);
    }
    let names = reps.iter().map(|&j| r.names[j].clone()).collect();
    let mut mapped: Vec<(Vec<(usize, f64)>, f64, f64, crate::relax::RowOrigin)> = Vec::new();
    for row in &r.rows {
        let mut coeffs: Vec<(usize, f64)> = row.coeffs.iter().map(|&(j, a)| (class[j], a)).collect();
        coeffs.sort_by_key(|c| c.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(coeffs.len());
        for (j, a) in coeffs {
            match merged.last_mut() {
                Some(l) if l.0 == j => l.1 += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|c| c.1 != 0.0);
        match merged[..] {
            [] if row.lo <= 0.0 && 0.0 <= row.hi => {}
            [(j, a)] => {
                let (b1, b2) = (row.lo / a, row.hi / a);
                let (l, h) = if a > 0.0 { (b1, b2) } else { (b2, b1) };
                lo[j] = lo[j].max(l);
                hi[j] = hi[j].min(h);
            }
            _ => mapped.push((merged, row.lo, row.hi, row.origin)),
        }
    }
    let mut out = LinearRelaxation::new(names, lo, hi);
    for (coeffs, rlo, rhi, origin) in mapped {
        let (mut amin, mut amax) = (0.0, 0.0);
        for &(j, a) in &coeffs {
            let (p, q) = (a * out.lo[j], a * out.hi[j]);
            amin += p.min(q);
            amax += p.max(q);
        }
        if amin >= rlo && amax <= rhi {
            continue;
        }
        out.add_range(coeffs, rlo, rhi, origin);
    }
    Presolved { relax: out, class }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::{Relation, RowOrigin};

    #[test]
    fn merges_equal_variables_and_drops_implied_rows() {
        let mut r = LinearRelaxation::new(vec!["x".into(), "y".into(), "z".into()], vec![0.0, 0.4, 0.0], vec![1.0, 2.0, 1.0]);
        r.add(vec![(0, 1.0), (1, -1.0)], Relation::Eq, 0.0, RowOrigin::Other);
        r.add(vec![(2, 2.0)], Relation::Le, 1.0, RowOrigin::Other);
        r.add(vec![(0, 1.0), (2, 1.0)], Relation::Le, 5.0, RowOrigin::Other);
        let p = presolve(&r);
        assert_eq!(p.class, vec![0, 0, 1]);
        assert_eq!(p.relax.lo, vec![0.4, 0.0]);
        assert_eq!(p.relax.hi, vec![1.0, 0.5]);
        assert!(p.relax.rows.is_empty());
    }
}

//! Angle variables of a candidate graph and the linear systems over them.
//!
//! Variables are the face corners in face-major order, then the edge length
//! `d`, then an auxiliary `a` standing for `alpha(d)`. Level one is a fixed
//! battery of vertex sums, per-face identities, and sampled face polytopes,
//! expanded into one alternative per hexagon branch. Level two adds envelopes
//! of the nonlinear face relations valid on the current box and rejects boxes
//! on which a flip or isolated-vertex condition fails everywhere.

mod envelope;
pub mod hull;
mod linear;

pub use envelope::{contract, envelopes, lower_bounds, Contraction, Envelope};
pub use linear::{LinearRelaxation, Relation, Row, RowOrigin};

use crate::geom::{
    alpha, complete_extended, complete_raw, flip_blocking_distance, hexagon_lambda, rho, EquilateralPolygon,
};
use crate::graphs::{GraphError, PlanarEmbeddedGraph};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Margin used to close strict inequalities.
pub const STRICT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceVars {
    /// Boundary vertices, counterclockwise.
    pub vertices: Vec<usize>,
    /// Corner variable of each boundary vertex.
    pub vars: Vec<usize>,
}

impl FaceVars {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }
}

/// Invariants: every corner owns one variable; `incidence[v]` is empty exactly
/// for isolated vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AngleSystem {
    pub n_vertices: usize,
    pub faces: Vec<FaceVars>,
    pub incidence: Vec<Vec<usize>>,
    pub num_corners: usize,
    pub isolated: Vec<usize>,
}

impl AngleSystem {
    pub fn d_var(&self) -> usize {
        self.num_corners
    }

    pub fn alpha_var(&self) -> usize {
        self.num_corners + 1
    }

    pub fn num_vars(&self) -> usize {
        self.num_corners + 2
    }

    pub fn var_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.num_vars());
        for (f, face) in self.faces.iter().enumerate() {
            for &v in &face.vertices {
                names.push(format!("u_f{f}_v{}", v + 1));
            }
        }
        names.push("d".into());
        names.push("a".into());
        names
    }

    pub fn hexagons(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|&f| self.faces[f].len() == 6).collect()
    }

    /// Angle of every corner from a realised configuration; `None` if a face
    /// vertex is missing. `d` and `a` are filled from `d`.
    pub fn assignment(&self, points: &[crate::geom::SphericalPoint], d: f64) -> Option<Vec<f64>> {
        let mut x = vec![0.0; self.num_vars()];
        for face in &self.faces {
            let m = face.len();
            for k in 0..m {
                let p = *points.get(face.vertices[(k + m - 1) % m])?;
                let v = *points.get(face.vertices[k])?;
                let n = *points.get(face.vertices[(k + 1) % m])?;
                x[face.vars[k]] = crate::geom::interior_angle(p, v, n);
            }
        }
        x[self.d_var()] = d;
        x[self.alpha_var()] = alpha(d).ok()?;
        Some(x)
    }
}

pub fn build_angle_system(g: &PlanarEmbeddedGraph) -> Result<AngleSystem, GraphError> {
    let faces = g.faces()?;
    let mut incidence = vec![Vec::new(); g.n()];
    let mut next = 0;
    let mut out = Vec::with_capacity(faces.len());
    for f in faces {
        let vars: Vec<usize> = (next..next + f.len()).collect();
        for (&v, &x) in f.vertices.iter().zip(&vars) {
            incidence[v].push(x);
        }
        next += f.len();
        out.push(FaceVars { vertices: f.vertices, vars });
    }
    Ok(AngleSystem {
        n_vertices: g.n(),
        faces: out,
        incidence,
        num_corners: next,
        isolated: g.isolated(),
    })
}

/// Window-dependent constants of the level-one battery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level1Profile {
    pub d_lo: f64,
    pub d_hi: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    /// Range of `u1 + u2` over rhombi.
    pub quad_sum: (f64, f64),
    /// Use the quoted 13-point pentagon rows, hexagon branches and hosting sum.
    pub quoted: bool,
}

impl Level1Profile {
    /// The 13-point window with its quoted constants.
    pub fn tammes13() -> Self {
        Self {
            d_lo: 0.9972,
            d_hi: 1.021 - STRICT_EPS,
            alpha_lo: 1.2113,
            alpha_hi: 1.2205 - STRICT_EPS,
            quad_sum: (3.6339, 3.779657),
            quoted: true,
        }
    }

    /// Constants computed for an arbitrary window `[d_lo, d_hi]`.
    pub fn for_window(d_lo: f64, d_hi: f64) -> Self {
        let (alo, ahi) = (alpha(d_lo).unwrap_or(0.0), alpha(d_hi).unwrap_or(PI));
        Self {
            d_lo,
            d_hi,
            alpha_lo: alo - STRICT_EPS,
            alpha_hi: ahi + STRICT_EPS,
            quad_sum: quad_sum_range(d_lo, d_hi),
            quoted: false,
        }
    }
}

/// Range of `u + rho(u, d)` over `u in [alpha(d), 2 alpha(d)]`, `d` in the window:
/// smallest at the ends of the `u` range for the smallest `d`, largest at the
/// symmetric rhombus for the largest `d`.
pub fn quad_sum_range(d_lo: f64, d_hi: f64) -> (f64, f64) {
    let lo = 3.0 * alpha(d_lo).unwrap_or(0.0);
    // the square is the maximiser; at d >= pi/2 the bound degenerates to 2 pi
    let hi = if d_hi < PI / 2.0 { 4.0 * (1.0 / d_hi.cos().sqrt()).atan() } else { 2.0 * PI };
    (lo - STRICT_EPS, hi + STRICT_EPS)
}

/// Which alternative of the disjunction a relaxation encodes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BranchInfo {
    /// Hexagon faces hosting the isolated vertices.
    pub hosting: Vec<usize>,
    /// `(face, k)`: empty hexagon `face` restricted to quoted polytope `k`.
    pub hexagon_k: Vec<(usize, usize)>,
}

impl BranchInfo {
    pub fn label(&self) -> String {
        let mut parts: Vec<String> = self.hosting.iter().map(|f| format!("host{f}")).collect();
        parts.extend(self.hexagon_k.iter().map(|(f, k)| format!("hex{f}k{}", k + 1)));
        if parts.is_empty() {
            "root".into()
        } else {
            parts.join(",")
        }
    }

    pub fn is_hosting(&self, face: usize) -> bool {
        self.hosting.contains(&face)
    }
}

/// Non-empty disjunction of relaxations over one variable space.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSet {
    pub branches: Vec<(BranchInfo, LinearRelaxation)>,
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Shared rows of every branch.
fn base_relaxation(sys: &AngleSystem, p: &Level1Profile) -> LinearRelaxation {
    let n = sys.num_vars();
    let (dv, av) = (sys.d_var(), sys.alpha_var());
    let mut lo = vec![p.alpha_lo; n];
    let mut hi = vec![PI - STRICT_EPS; n];
    lo[dv] = p.d_lo;
    hi[dv] = p.d_hi;
    lo[av] = p.alpha_lo;
    hi[av] = p.alpha_hi;
    let mut r = LinearRelaxation::new(sys.var_names(), lo, hi);
    for inc in &sys.incidence {
        if !inc.is_empty() {
            r.add(inc.iter().map(|&j| (j, 1.0)).collect(), Relation::Eq, 2.0 * PI, RowOrigin::VertexSum);
        }
    }
    for face in &sys.faces {
        let u = &face.vars;
        match face.len() {
            3 => {
                for &j in u {
                    r.add(vec![(j, 1.0), (av, -1.0)], Relation::Eq, 0.0, RowOrigin::Triangle);
                }
            }
            4 => {
                r.add(vec![(u[0], 1.0), (u[2], -1.0)], Relation::Eq, 0.0, RowOrigin::Quad);
                r.add(vec![(u[1], 1.0), (u[3], -1.0)], Relation::Eq, 0.0, RowOrigin::Quad);
                for &j in &u[..2] {
                    r.add(vec![(j, 1.0), (av, -1.0)], Relation::Ge, 0.0, RowOrigin::AngleBound);
                    r.add(vec![(j, 1.0), (av, -2.0)], Relation::Le, 0.0, RowOrigin::Quad);
                }
                r.add_range(vec![(u[0], 1.0), (u[1], 1.0)], p.quad_sum.0, p.quad_sum.1, RowOrigin::QuadWindow);
            }
            _ => {
                for &j in u {
                    r.add(vec![(j, 1.0), (av, -1.0)], Relation::Ge, 0.0, RowOrigin::AngleBound);
                }
                if face.len() == 5 && p.d_hi < PI / 2.0 {
                    let h = hull::pentagon_hull(p.d_lo, p.d_hi, p.quoted);
                    for row in &h.rows {
                        let coeffs = u.iter().zip(&row.coeffs).map(|(&j, &c)| (j, c)).collect();
                        r.add_range(coeffs, row.lo, row.hi, RowOrigin::Pentagon);
                    }
                }
            }
        }
    }
    r
}

/// Level-one battery, one alternative per choice of hosting hexagons and, with
/// the quoted profile, per quoted polytope of each empty hexagon.
pub fn level1_constraints(sys: &AngleSystem, p: &Level1Profile) -> BranchSet {
    let base = base_relaxation(sys, p);
    let hexes = sys.hexagons();
    let mut branches = Vec::new();
    for hosting in combinations(&hexes, sys.isolated.len()) {
        let empty: Vec<usize> = hexes.iter().copied().filter(|f| !hosting.contains(f)).collect();
        let mut with_host = base.clone();
        if p.quoted {
            for &f in &hosting {
                let coeffs = sys.faces[f].vars.iter().map(|&j| (j, 1.0)).collect();
                with_host.add(coeffs, Relation::Ge, hull::HOSTING_SUM_MIN, RowOrigin::IsolatedHexagon);
            }
        }
        let choices: Vec<Vec<(usize, usize)>> = if p.quoted {
            empty.iter().fold(vec![Vec::new()], |acc, &f| {
                acc.into_iter()
                    .flat_map(|c| {
                        (0..hull::HEXAGON_BRANCHES).map(move |k| {
                            let mut c = c.clone();
                            c.push((f, k));
                            c
                        })
                    })
                    .collect()
            })
        } else {
            vec![Vec::new()]
        };
        for hexagon_k in choices {
            let mut r = with_host.clone();
            for &(f, k) in &hexagon_k {
                for (&j, (lo, hi)) in sys.faces[f].vars.iter().zip(hull::hexagon_branch_bounds(k)) {
                    r.add_range(vec![(j, 1.0)], lo, hi, RowOrigin::Hexagon);
                }
            }
            branches.push((BranchInfo { hosting: hosting.clone(), hexagon_k }, r));
        }
    }
    if branches.is_empty() {
        // more isolated vertices than hexagons: a single contradictory alternative
        let mut r = base;
        r.add(vec![], Relation::Ge, 1.0, RowOrigin::IsolatedHexagon);
        branches.push((BranchInfo::default(), r));
    }
    BranchSet { branches }
}

/// Why a box was rejected without an LP certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Level2Rejection {
    EmptyBox,
    /// No grid cell of the face's driving box admits a completion with the
    /// other angles in range, flips blocked, or room for the isolated vertex.
    NoAdmissibleCell { face: usize, rotation: usize },
}

/// Grid resolutions per face type.
const Q_QUAD: usize = 5;
const Q_PENT: usize = 4;
const Q_HEX: usize = 3;
const Q_CONTRACT_PENT: usize = 9;
const Q_CONTRACT_HEX: usize = 6;
const Q_CONTRACT_D: usize = 3;

fn bounds_of(r: &LinearRelaxation, vars: &[usize]) -> (Vec<f64>, Vec<f64>) {
    (vars.iter().map(|&j| r.lo[j]).collect(), vars.iter().map(|&j| r.hi[j]).collect())
}

fn add_envelope_rows(r: &mut LinearRelaxation, inputs: &[usize], outputs: &[usize], env: &[Envelope]) {
    for (&y, e) in outputs.iter().zip(env) {
        let (lo, hi) = e.row_range();
        let mut coeffs = vec![(y, 1.0)];
        coeffs.extend(inputs.iter().zip(&e.grad).map(|(&x, &g)| (x, -g)));
        r.add_range(coeffs, lo, hi, RowOrigin::Level2);
    }
}

/// Completion of an `M`-gon from `M-3` leading angles followed by `d`, continued
/// past the closable region so that grids straddling its boundary stay usable.
/// Points outside the region are not realisable, so any continuous value there
/// keeps the envelopes valid where it matters.
fn completion<const M: usize>(x: &[f64]) -> Option<EquilateralPolygon<M>> {
    let (angles, d) = x.split_at(M - 3);
    complete_extended::<M>(angles, d[0])
}

fn completion_strict<const M: usize>(x: &[f64]) -> Option<EquilateralPolygon<M>> {
    let (angles, d) = x.split_at(M - 3);
    complete_raw::<M>(angles, d[0])
}

fn relation_envelopes<const M: usize>(r: &mut LinearRelaxation, face: &FaceVars, dv: usize, q: usize) {
    let g = M - 3;
    for s in 0..M {
        let mut inputs: Vec<usize> = (0..g).map(|t| face.vars[(s + t) % M]).collect();
        inputs.push(dv);
        let outputs: Vec<usize> = (g..M).map(|t| face.vars[(s + t) % M]).collect();
        let (lo, hi) = bounds_of(r, &inputs);
        let env = envelopes(&lo, &hi, q, |x| completion::<M>(x).map(|p| p.angles[g..].to_vec()));
        if let Some(env) = env {
            add_envelope_rows(r, &inputs, &outputs, &env);
        }
    }
}

/// Componentwise conditions for a completed face to be admissible, all `<= 0`:
/// the remaining angles inside their boxes and, for faces without an isolated
/// vertex, every flip blocked; a hosting hexagon needs `lambda >= d` instead.
fn admissibility<const M: usize>(
    r: &LinearRelaxation,
    outputs: &[usize],
    p: &EquilateralPolygon<M>,
    lambda: Option<Lambda<M>>,
) -> Option<Vec<f64>> {
    let g = M - outputs.len();
    let mut out = Vec::with_capacity(2 * outputs.len() + M);
    for (t, &y) in outputs.iter().enumerate() {
        let a = p.angles[g + t];
        out.push(r.lo[y] - a);
        out.push(a - r.hi[y]);
    }
    if let Some(lambda) = lambda {
        let l = lambda(p);
        // no placement at all is left undecided here
        if !l.is_finite() {
            return None;
        }
        out.push(p.d - l);
    } else {
        out.extend((0..M).map(|i| flip_blocking_distance(i, p) - p.d));
    }
    Some(out)
}

type Lambda<const M: usize> = fn(&EquilateralPolygon<M>) -> f64;

/// Cuts the driving variables of every rotation of the face to the grid cells
/// where an admissible completion may exist.
fn contract_face<const M: usize>(
    r: &mut LinearRelaxation,
    face: &FaceVars,
    f: usize,
    dv: usize,
    lambda: Option<Lambda<M>>,
) -> Result<(), Level2Rejection> {
    let g = M - 3;
    let q: Vec<usize> = (0..g).map(|_| if M == 5 { Q_CONTRACT_PENT } else { Q_CONTRACT_HEX }).chain([Q_CONTRACT_D]).collect();
    for s in 0..M {
        let mut inputs: Vec<usize> = (0..g).map(|t| face.vars[(s + t) % M]).collect();
        inputs.push(dv);
        let outputs: Vec<usize> = (g..M).map(|t| face.vars[(s + t) % M]).collect();
        let (lo, hi) = bounds_of(r, &inputs);
        let c = {
            let rr: &LinearRelaxation = r;
            contract(&lo, &hi, &q, |x| {
                let p = if lambda.is_some() { completion_strict::<M>(x)? } else { completion::<M>(x)? };
                admissibility(rr, &outputs, &p, lambda)
            })
        };
        match c {
            Contraction::Empty => return Err(Level2Rejection::NoAdmissibleCell { face: f, rotation: s }),
            Contraction::Hull(h) => {
                for (&j, &(a, b)) in inputs.iter().zip(&h) {
                    r.restrict(j, a, b);
                }
            }
        }
        if r.box_empty() {
            return Err(Level2Rejection::EmptyBox);
        }
    }
    Ok(())
}

/// Replaces earlier level-two rows with envelopes valid on the current box.
/// Rhombus boxes are also cut to the monotone range of `rho`, which is exact.
pub fn level2_tighten(
    relax: &LinearRelaxation,
    sys: &AngleSystem,
    branch: &BranchInfo,
) -> Result<LinearRelaxation, Level2Rejection> {
    let mut r = relax.without_origin(RowOrigin::Level2);
    if r.box_empty() {
        return Err(Level2Rejection::EmptyBox);
    }
    let (dv, av) = (sys.d_var(), sys.alpha_var());
    let (dlo, dhi) = (r.lo[dv], r.hi[dv]);
    if let Some(env) = envelopes(&[dlo], &[dhi], Q_QUAD, |x| alpha(x[0]).ok().map(|a| vec![a])) {
        add_envelope_rows(&mut r, &[dv], &[av], &env);
    }
    if let (Ok(a_lo), Ok(a_hi)) = (alpha(dlo), alpha(dhi)) {
        r.restrict(av, a_lo - 1e-12, a_hi + 1e-12);
    }
    for (f, face) in sys.faces.iter().enumerate() {
        let u = &face.vars;
        match face.len() {
            4 => {
                for (x, y) in [(u[0], u[1]), (u[1], u[0])] {
                    let (xl, xh) = (r.lo[x], r.hi[x]);
                    if let (Ok(a), Ok(b)) = (rho(xh, dlo), rho(xl, dhi)) {
                        r.restrict(y, a - 1e-12, b + 1e-12);
                    }
                    let env = envelopes(&[xl, dlo], &[xh, dhi], Q_QUAD, |p| rho(p[0], p[1]).ok().map(|v| vec![v]));
                    if let Some(env) = env {
                        add_envelope_rows(&mut r, &[x, dv], &[y], &env);
                    }
                }
            }
            5 => {
                contract_face::<5>(&mut r, face, f, dv, None)?;
                relation_envelopes::<5>(&mut r, face, dv, Q_PENT);
            }
            6 => {
                let lambda: Option<Lambda<6>> = branch.is_hosting(f).then_some(hexagon_lambda);
                contract_face::<6>(&mut r, face, f, dv, lambda)?;
                relation_envelopes::<6>(&mut r, face, dv, Q_HEX);
            }
            _ => {}
        }
        if r.box_empty() {
            return Err(Level2Rejection::EmptyBox);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::gamma13_fixtures;

    fn tetrahedron() -> PlanarEmbeddedGraph {
        crate::graphs::contact_graph(
            &[
                crate::geom::SphericalPoint::normalize([1.0, 1.0, 1.0]).unwrap(),
                crate::geom::SphericalPoint::normalize([1.0, -1.0, -1.0]).unwrap(),
                crate::geom::SphericalPoint::normalize([-1.0, 1.0, -1.0]).unwrap(),
                crate::geom::SphericalPoint::normalize([-1.0, -1.0, 1.0]).unwrap(),
            ],
            1e-9,
        )
        .unwrap()
    }

    #[test]
    fn tetrahedron_system() {
        let sys = build_angle_system(&tetrahedron()).unwrap();
        assert_eq!(sys.num_corners, 12);
        assert_eq!(sys.num_vars(), 14);
        assert!(sys.incidence.iter().all(|i| i.len() == 3));
    }

    #[test]
    fn gamma0_counts() {
        let g = &gamma13_fixtures()[0].graph;
        let sys = build_angle_system(g).unwrap();
        let total: usize = g.faces().unwrap().iter().map(|f| f.len()).sum();
        assert_eq!(sys.num_corners, total);
        assert_eq!(sys.incidence.iter().filter(|i| !i.is_empty()).count(), 13);
    }

    #[test]
    fn isolated_vertex_has_no_corners() {
        let g = &gamma13_fixtures()[3].graph;
        let sys = build_angle_system(g).unwrap();
        assert_eq!(sys.isolated, vec![12]);
        assert!(sys.incidence[12].is_empty());
        let set = level1_constraints(&sys, &Level1Profile::tammes13());
        let sums = set.branches[0].1.rows.iter().filter(|r| r.origin == RowOrigin::VertexSum).count();
        assert_eq!(sums, 12);
        assert!(set.branches.iter().all(|(b, _)| b.hosting.len() == 1));
    }

    #[test]
    fn combinations_choose() {
        assert_eq!(combinations(&[1, 2, 3], 2).len(), 3);
        assert_eq!(combinations(&[1, 2], 0), vec![Vec::<usize>::new()]);
        assert!(combinations(&[1], 2).is_empty());
    }

    #[test]
    fn quad_sum_matches_quoted_window() {
        let (lo, hi) = quad_sum_range(0.9972, 1.021);
        assert!(lo >= 3.6339 && lo < 3.6345);
        assert!(hi <= 3.779657 && hi > 3.778);
    }
}

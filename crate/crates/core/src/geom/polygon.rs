use super::{
    add, angular_dist, norm, scale, circle_intersections, cross, dot, flip_image, rotate, step, tangent, GeomError,
    SphericalPoint, Vec3, CONVEX_TOL,
};
use std::f64::consts::PI;

/// Equilateral spherical polygon with `M` corners, listed counterclockwise seen
/// from outside the sphere. `angles[k]` is the interior angle at `vertices[k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilateralPolygon<const M: usize> {
    pub angles: [f64; M],
    pub d: f64,
    pub vertices: [SphericalPoint; M],
}

pub type PentagonSolution = EquilateralPolygon<5>;
pub type HexagonSolution = EquilateralPolygon<6>;

/// Interior angle at `v` of a counterclockwise polygon with neighbours `prev` and `next`,
/// in `[0, 2pi)`.
pub fn interior_angle(prev: SphericalPoint, v: SphericalPoint, next: SphericalPoint) -> f64 {
    let (p, c, n) = (prev.to_array(), v.to_array(), next.to_array());
    let tp = tangent(c, p);
    let tn = tangent(c, n);
    let a = dot(cross(tn, tp), c).atan2(dot(tn, tp));
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Walks `M-2` consecutive corners from the given leading angles and closes the
/// last vertex by circle intersection. Returns vertices without any convexity check.
///
/// `given[0]` is the angle at vertex 0, `given[k]` the angle at vertex `k`.
/// With `extend`, a gap wider than `2d` is closed at the arc midpoint, which is
/// where the two intersections merge on the boundary of the closable region.
fn build_vertices<const M: usize>(given: &[f64], d: f64, extend: bool) -> Option<[Vec3; M]> {
    let g = given.len();
    debug_assert!(g == M - 3);
    let mut v = [[0.0; 3]; M];
    v[0] = [0.0, 0.0, 1.0];
    v[1] = step(v[0], [1.0, 0.0, 0.0], d);
    // vertex M-1 from the angle at vertex 0
    let t01 = tangent(v[0], v[1]);
    v[M - 1] = step(v[0], rotate(t01, v[0], given[0]), d);
    // forward walk: at vertex k, next direction = back direction rotated clockwise by u_k
    for k in 1..g {
        let back = tangent(v[k], v[k - 1]);
        v[k + 1] = step(v[k], rotate(back, v[k], -given[k]), d);
    }
    // close: vertex g+1 sits at distance d from vertex g and vertex M-1, on the outer side
    let (a, b) = (v[g], v[M - 1]);
    v[g + 1] = match circle_intersections(a, b, d) {
        Some((p, q)) => {
            let side = cross(a, b);
            if dot(side, p) < dot(side, q) {
                p
            } else {
                q
            }
        }
        None if extend => {
            let m = add(a, b);
            let n = norm(m);
            if n < 1e-12 {
                return None;
            }
            scale(m, 1.0 / n)
        }
        None => return None,
    };
    for x in v.iter() {
        if x.iter().any(|c| !c.is_finite()) {
            return None;
        }
    }
    Some(v)
}

fn polygon_from_vertices<const M: usize>(v: [Vec3; M], d: f64) -> EquilateralPolygon<M> {
    let vertices = v.map(SphericalPoint::from_unit);
    let mut angles = [0.0; M];
    for k in 0..M {
        angles[k] = interior_angle(vertices[(k + M - 1) % M], vertices[k], vertices[(k + 1) % M]);
    }
    EquilateralPolygon { angles, d, vertices }
}

/// Completes an equilateral polygon from its first `M-3` consecutive angles
/// without convexity checks. `None` when the closing circles do not meet.
pub fn complete_raw<const M: usize>(given: &[f64], d: f64) -> Option<EquilateralPolygon<M>> {
    if given.len() != M - 3 || !(d > 0.0 && d < PI / 2.0) {
        return None;
    }
    build_vertices::<M>(given, d, false).map(|v| polygon_from_vertices(v, d))
}

/// As [`complete_raw`], but continued past the closable region by placing the
/// last vertex at the midpoint of the gap. The closing edges are then longer
/// than `d`; the result is only meaningful as a continuous extension for
/// bounding purposes.
pub fn complete_extended<const M: usize>(given: &[f64], d: f64) -> Option<EquilateralPolygon<M>> {
    if given.len() != M - 3 || !(d > 0.0 && d < PI / 2.0) {
        return None;
    }
    build_vertices::<M>(given, d, true).map(|v| polygon_from_vertices(v, d))
}

impl<const M: usize> EquilateralPolygon<M> {
    /// Strict convexity: every other vertex lies strictly left of each directed edge
    /// and every angle is below `pi - CONVEX_TOL`.
    pub fn check_convex(&self) -> Result<(), GeomError> {
        for (k, &a) in self.angles.iter().enumerate() {
            if !(a > 0.0 && a < PI - CONVEX_TOL) {
                return Err(GeomError::NonConvex { corner: k, angle: a });
            }
        }
        for k in 0..M {
            let n = cross(self.vertices[k].to_array(), self.vertices[(k + 1) % M].to_array());
            for j in 0..M {
                if j == k || j == (k + 1) % M {
                    continue;
                }
                if dot(n, self.vertices[j].to_array()) <= 0.0 {
                    return Err(GeomError::NonConvex { corner: j, angle: self.angles[j] });
                }
            }
        }
        Ok(())
    }

    /// Largest deviation of an edge length from `d`, including the closing edge.
    pub fn edge_error(&self) -> f64 {
        (0..M)
            .map(|k| (angular_dist(self.vertices[k], self.vertices[(k + 1) % M]) - self.d).abs())
            .fold(0.0, f64::max)
    }

    /// Whether `p` lies strictly inside the (convex, counterclockwise) polygon.
    pub fn contains(&self, p: Vec3) -> bool {
        (0..M).all(|k| {
            let n = cross(self.vertices[k].to_array(), self.vertices[(k + 1) % M].to_array());
            dot(n, p) > 0.0
        })
    }

    /// Danzer flip of corner `i` across the great circle through its two neighbours.
    pub fn flipped(&self, i: usize) -> SphericalPoint {
        let prev = self.vertices[(i + M - 1) % M];
        let next = self.vertices[(i + 1) % M];
        // neighbours are distinct points at distance <= 2d < pi from each other
        flip_image(self.vertices[i], prev, next).expect("polygon neighbours span a plane")
    }
}

fn check_domain(us: &[f64], d: f64) -> Result<(), GeomError> {
    if !(d > 0.0 && d < PI / 2.0) {
        return Err(GeomError::Domain(format!("d = {d} outside (0, pi/2)")));
    }
    for (k, &u) in us.iter().enumerate() {
        if !(u > 0.0 && u < PI) {
            return Err(GeomError::Domain(format!("u{} = {u} outside (0, pi)", k + 1)));
        }
    }
    Ok(())
}

fn complete_checked<const M: usize>(
    given: &[f64],
    d: f64,
) -> Result<EquilateralPolygon<M>, GeomError> {
    check_domain(given, d)?;
    let sol = complete_raw::<M>(given, d).ok_or_else(|| {
        GeomError::InfeasibleGeometry("closing circles do not intersect".into())
    })?;
    sol.check_convex()?;
    Ok(sol)
}

/// The convex equilateral pentagon with side `d` and consecutive angles `u1, u2`.
pub fn pentagon_complete(u1: f64, u2: f64, d: f64) -> Result<PentagonSolution, GeomError> {
    complete_checked::<5>(&[u1, u2], d)
}

/// The convex equilateral hexagon with side `d` and consecutive angles `u1, u2, u3`.
pub fn hexagon_complete(u1: f64, u2: f64, u3: f64, d: f64) -> Result<HexagonSolution, GeomError> {
    complete_checked::<6>(&[u1, u2, u3], d)
}

/// Minimum distance from the flipped corner `i` to the non-adjacent vertices.
/// The flip is blocked exactly when this is below `d`.
pub fn flip_blocking_distance<const M: usize>(i: usize, sol: &EquilateralPolygon<M>) -> f64 {
    let img = sol.flipped(i);
    (0..M)
        .filter(|&j| j != i && j != (i + 1) % M && j != (i + M - 1) % M)
        .map(|j| angular_dist(img, sol.vertices[j]))
        .fold(f64::INFINITY, f64::min)
}

fn flip_clearance<const M: usize>(i: usize, sol: &EquilateralPolygon<M>) -> f64 {
    let img = sol.flipped(i);
    (0..M)
        .filter(|&j| j != i)
        .map(|j| angular_dist(img, sol.vertices[j]))
        .fold(f64::INFINITY, f64::min)
}

/// `xi_i`: minimum distance from the flipped corner `i` (0-based) to every other vertex.
/// Never exceeds `d` because the two neighbours stay at distance `d`.
pub fn pentagon_flip_clearance(i: usize, sol: &PentagonSolution) -> f64 {
    flip_clearance(i % 5, sol)
}

/// `zeta_i`: hexagon analogue of [`pentagon_flip_clearance`].
pub fn hexagon_flip_clearance(i: usize, sol: &HexagonSolution) -> f64 {
    flip_clearance(i % 6, sol)
}

/// A point of `Pi`: interior, at distance `d` from corners `pair`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaPlacement {
    pub point: SphericalPoint,
    pub pair: (usize, usize),
    /// Minimum distance to the four remaining corners.
    pub value: f64,
}

/// Enumerates `Pi` exhaustively over all vertex pairs.
pub fn lambda_placements(sol: &HexagonSolution) -> Vec<LambdaPlacement> {
    let mut out = Vec::new();
    for i in 0..6 {
        for j in (i + 1)..6 {
            let (a, b) = (sol.vertices[i].to_array(), sol.vertices[j].to_array());
            let Some((p, q)) = circle_intersections(a, b, sol.d) else {
                continue;
            };
            for x in [p, q] {
                if !sol.contains(x) {
                    continue;
                }
                let point = SphericalPoint::from_unit(x);
                let value = (0..6)
                    .filter(|&k| k != i && k != j)
                    .map(|k| angular_dist(point, sol.vertices[k]))
                    .fold(f64::INFINITY, f64::min);
                out.push(LambdaPlacement { point, pair: (i, j), value });
            }
        }
    }
    out
}

/// `lambda = max over Pi of min distance to the other four corners`;
/// `-inf` when `Pi` is empty.
pub fn hexagon_lambda(sol: &HexagonSolution) -> f64 {
    lambda_placements(sol)
        .iter()
        .map(|p| p.value)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_produces_counterclockwise_angles() {
        let s = pentagon_complete(1.9, 1.9, 1.0).unwrap();
        assert!((s.angles[0] - 1.9).abs() < 1e-12);
        assert!((s.angles[1] - 1.9).abs() < 1e-12);
        assert!(s.edge_error() < 1e-12);
    }

    #[test]
    fn regular_hexagon_lambda_positive() {
        // d small enough for a sixth-of-a-turn hexagon to host an interior point far away
        let d = 0.9;
        let mut lo: f64 = 1.6;
        let mut hi: f64 = 3.1;
        for _ in 0..80 {
            let m = 0.5 * (lo + hi);
            match complete_raw::<6>(&[m, m, m], d) {
                Some(s) if s.angles[3] > m => lo = m,
                _ => hi = m,
            }
        }
        let s = hexagon_complete(lo, lo, lo, d).unwrap();
        let pl = lambda_placements(&s);
        assert!(!pl.is_empty());
        assert!(pl.len() <= 30);
    }
}

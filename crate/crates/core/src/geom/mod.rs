//! Spherical geometry on the unit sphere: points, distances, the equilateral
//! angle functions `alpha` and `rho`, Danzer flips, and equilateral polygon
//! completion.

mod polygon;
pub mod admissible;

pub use polygon::{
    complete_extended, complete_raw, flip_blocking_distance, hexagon_complete, hexagon_flip_clearance,
    hexagon_lambda, interior_angle, lambda_placements, pentagon_complete,
    pentagon_flip_clearance, EquilateralPolygon, HexagonSolution, LambdaPlacement,
    PentagonSolution,
};

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Tolerance on `|p| - 1` accepted by [`SphericalPoint::new`].
pub const UNIT_INPUT_TOL: f64 = 1e-6;
/// Interior angles within this of `pi` count as non-convex.
pub const CONVEX_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("no equilateral polygon closes: {0}")]
    InfeasibleGeometry(String),
    #[error("polygon is not strictly convex (angle {angle:.6} at corner {corner})")]
    NonConvex { corner: usize, angle: f64 },
}

pub type Vec3 = [f64; 3];

#[inline]
pub(crate) fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// A point on the unit sphere. Invariant: `| |p| - 1 | <= 1e-12`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalPoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SphericalPoint {
    /// Accepts vectors within [`UNIT_INPUT_TOL`] of unit length and renormalizes.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeomError> {
        let v = [x, y, z];
        let n = norm(v);
        if !n.is_finite() || (n - 1.0).abs() > UNIT_INPUT_TOL {
            return Err(GeomError::Domain(format!("point norm {n} is not 1")));
        }
        Ok(Self::from_unit(scale(v, 1.0 / n)))
    }

    /// Projects any nonzero finite vector onto the sphere.
    pub fn normalize(v: Vec3) -> Result<Self, GeomError> {
        let n = norm(v);
        if !n.is_finite() || n < 1e-300 {
            return Err(GeomError::Domain("cannot normalize zero vector".into()));
        }
        Ok(Self::from_unit(scale(v, 1.0 / n)))
    }

    /// Latitude/longitude in radians.
    pub fn from_lat_lon(lat: f64, lon: f64) -> Self {
        Self::from_unit([lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()])
    }

    #[inline]
    pub(crate) fn from_unit(v: Vec3) -> Self {
        let n = norm(v);
        let v = if (n - 1.0).abs() > 1e-13 { scale(v, 1.0 / n) } else { v };
        SphericalPoint { x: v[0], y: v[1], z: v[2] }
    }

    #[inline]
    pub fn to_array(self) -> Vec3 {
        [self.x, self.y, self.z]
    }

    pub fn x(self) -> f64 {
        self.x
    }
    pub fn y(self) -> f64 {
        self.y
    }
    pub fn z(self) -> f64 {
        self.z
    }
}

/// Great-circle distance in `[0, pi]`, computed with `atan2` for accuracy at both ends.
#[inline]
pub fn angular_dist(p: SphericalPoint, q: SphericalPoint) -> f64 {
    let (a, b) = (p.to_array(), q.to_array());
    norm(cross(a, b)).atan2(dot(a, b))
}

/// Corner angle of the equilateral spherical triangle with side `d`, `0 < d < 2pi/3`.
pub fn alpha(d: f64) -> Result<f64, GeomError> {
    if !(d > 0.0 && d < 2.0 * PI / 3.0) {
        return Err(GeomError::Domain(format!("alpha: d = {d} outside (0, 2pi/3)")));
    }
    Ok(alpha_raw(d))
}

#[inline]
pub(crate) fn alpha_raw(d: f64) -> f64 {
    let c = d.cos();
    (c / (1.0 + c)).clamp(-1.0, 1.0).acos()
}

/// Opposite angle of the rhombus with side `d` and angle `u`; an involution in `u`.
pub fn rho(u: f64, d: f64) -> Result<f64, GeomError> {
    if !(u > 0.0 && u < PI) {
        return Err(GeomError::Domain(format!("rho: u = {u} outside (0, pi)")));
    }
    if !(d > 0.0 && d < PI / 2.0) {
        return Err(GeomError::Domain(format!("rho: d = {d} outside (0, pi/2)")));
    }
    Ok(rho_raw(u, d))
}

/// `2 acot(tan(u/2) cos d)`; continuous for `u` in `(0, 2pi)`.
#[inline]
pub(crate) fn rho_raw(u: f64, d: f64) -> f64 {
    2.0 * 1.0f64.atan2((0.5 * u).tan() * d.cos())
}

/// Reflection of `x` across the plane through the origin spanned by `y` and `z`.
pub fn flip_image(
    x: SphericalPoint,
    y: SphericalPoint,
    z: SphericalPoint,
) -> Result<SphericalPoint, GeomError> {
    let n = cross(y.to_array(), z.to_array());
    let nn = dot(n, n);
    if nn < 1e-24 {
        return Err(GeomError::Domain("flip: y and z are (anti)parallel".into()));
    }
    let xv = x.to_array();
    let k = 2.0 * dot(xv, n) / nn;
    Ok(SphericalPoint::from_unit(sub(xv, scale(n, k))))
}

/// Rodrigues rotation of `v` about the unit `axis` by `t` (counterclockwise seen from outside).
#[inline]
pub(crate) fn rotate(v: Vec3, axis: Vec3, t: f64) -> Vec3 {
    let (s, c) = t.sin_cos();
    let kxv = cross(axis, v);
    let kv = dot(axis, v);
    add(add(scale(v, c), scale(kxv, s)), scale(axis, kv * (1.0 - c)))
}

/// Unit tangent at `from` pointing along the great circle towards `to`.
#[inline]
pub(crate) fn tangent(from: Vec3, to: Vec3) -> Vec3 {
    let t = sub(to, scale(from, dot(from, to)));
    scale(t, 1.0 / norm(t))
}

/// Point at distance `d` from `p` in tangent direction `t`.
#[inline]
pub(crate) fn step(p: Vec3, t: Vec3, d: f64) -> Vec3 {
    add(scale(p, d.cos()), scale(t, d.sin()))
}

/// Both points at distance `d` from `a` and `b`, or `None` when the circles miss.
pub(crate) fn circle_intersections(a: Vec3, b: Vec3, d: f64) -> Option<(Vec3, Vec3)> {
    let c = d.cos();
    let g = dot(a, b);
    if g >= 1.0 - 1e-15 || g <= -1.0 + 1e-15 {
        return None;
    }
    let n = cross(a, b);
    let nn = 1.0 - g * g;
    let k = c / (1.0 + g);
    let gamma2 = (1.0 - 2.0 * c * k) / nn;
    if gamma2 < -1e-14 {
        return None;
    }
    let gamma = gamma2.max(0.0).sqrt();
    let base = scale(add(a, b), k);
    Some((add(base, scale(n, gamma)), sub(base, scale(n, gamma))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_at_pi_over_three_matches_tetrahedral_face() {
        // cos(a) = (1/2)/(3/2) = 1/3
        assert!((alpha(PI / 3.0).unwrap() - (1.0f64 / 3.0).acos()).abs() < 1e-14);
    }

    #[test]
    fn rho_square_fixed_point_as_d_vanishes() {
        assert!((rho(PI / 2.0, 1e-9).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((rho(1.0, 1e-9).unwrap() - (PI - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn domains_rejected() {
        assert!(alpha(0.0).is_err());
        assert!(alpha(2.0 * PI / 3.0).is_err());
        assert!(rho(0.0, 1.0).is_err());
        assert!(rho(1.0, PI / 2.0).is_err());
        assert!(SphericalPoint::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn circle_intersection_points_are_equidistant() {
        let a = [0.0, 0.0, 1.0];
        let b = step(a, [1.0, 0.0, 0.0], 1.2);
        let (p, q) = circle_intersections(a, b, 1.0).unwrap();
        for x in [p, q] {
            let x = SphericalPoint::from_unit(x);
            assert!((angular_dist(x, SphericalPoint::from_unit(a)) - 1.0).abs() < 1e-12);
            assert!((angular_dist(x, SphericalPoint::from_unit(b)) - 1.0).abs() < 1e-12);
        }
        assert!(circle_intersections(a, b, 0.5).is_none());
    }
}

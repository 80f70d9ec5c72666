use super::CaseError;
use crate::geom::{alpha, alpha_raw, flip_image, rho_raw, rotate, step, SphericalPoint};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const TAU: f64 = 2.0 * PI;

/// Angles of the 13-point frame as functions of `(u1, u2, d)`.
///
/// Vertices are labelled `v1..v13`; with `A = v1` the hub of the four
/// rhombi `Q1..Q4 = (A,B,P,F), (A,B,C,D), (A,D,X,E), (A,E,W,F)`:
/// `u1..u4` are the angles at `A`, `u5..u8` their `rho` images at the rim,
/// `u9..u12` the rim angles of the outer rhombi, `u13..u16` their `rho` images.
/// `u17`, `u18` are the angles left over at `v7` and `v10` by the surrounding
/// rhombi; both equal `u0` in the full graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleChain {
    pub d: f64,
    pub u: [f64; 19],
}

impl AngleChain {
    pub fn u0(&self) -> f64 {
        self.u[0]
    }
    pub fn u17(&self) -> f64 {
        self.u[17]
    }
    pub fn u18(&self) -> f64 {
        self.u[18]
    }
}

/// Evaluates the chain; the first of `u3..u16` leaving `(0, pi)` is reported.
pub fn angle_chain(u1: f64, u2: f64, d: f64) -> Result<AngleChain, CaseError> {
    let mut u = [0.0; 19];
    u[0] = alpha(d).map_err(|e| CaseError::Domain { index: 0, value: d, detail: e.to_string() })?;
    if !(d > 0.0 && d < PI / 2.0) {
        return Err(CaseError::Domain { index: 0, value: d, detail: "d outside (0, pi/2)".into() });
    }
    u[1] = u1;
    u[2] = u2;
    let check = |u: &[f64; 19], i: usize| -> Result<(), CaseError> {
        if u[i] > 0.0 && u[i] < PI {
            Ok(())
        } else {
            Err(CaseError::Domain { index: i, value: u[i], detail: "angle outside (0, pi)".into() })
        }
    };
    check(&u, 1)?;
    check(&u, 2)?;
    u[5] = rho_raw(u[1], d);
    u[6] = rho_raw(u[2], d);
    u[9] = TAU - u[5] - u[6];
    check(&u, 9)?;
    u[13] = rho_raw(u[9], d);
    u[14] = TAU - u[0] - u[13] - u[2];
    check(&u, 14)?;
    // the table's "rho(u14)" read with the common side d
    u[10] = rho_raw(u[14], d);
    u[7] = TAU - u[6] - u[10];
    check(&u, 7)?;
    u[3] = rho_raw(u[7], d);
    u[4] = TAU - u[1] - u[2] - u[3];
    check(&u, 4)?;
    u[8] = rho_raw(u[4], d);
    u[11] = TAU - u[7] - u[8];
    check(&u, 11)?;
    u[12] = TAU - u[8] - u[5];
    check(&u, 12)?;
    u[15] = rho_raw(u[11], d);
    u[16] = rho_raw(u[12], d);
    for i in [3, 5, 6, 8, 10, 13, 15, 16] {
        check(&u, i)?;
    }
    u[17] = TAU - u[1] - u[13] - u[16];
    u[18] = TAU - u[14] - u[3] - u[15];
    Ok(AngleChain { d, u })
}

/// `u0 + u15 + u4 + u16 - 2pi`: the angle sum at `v8` minus a full turn.
pub fn closure_residual(u1: f64, u2: f64, d: f64) -> Result<f64, CaseError> {
    let c = angle_chain(u1, u2, d)?;
    Ok(c.u[0] + c.u[15] + c.u[4] + c.u[16] - TAU)
}

/// Vertex indices (0-based) of the frame labels.
pub mod label {
    pub const A: usize = 0;
    pub const B: usize = 1;
    pub const C: usize = 2;
    pub const D: usize = 3;
    pub const E: usize = 4;
    pub const F: usize = 5;
    pub const P: usize = 6;
    pub const W: usize = 7;
    pub const R: usize = 8;
    pub const X: usize = 9;
    pub const S: usize = 10;
    pub const U: usize = 11;
    pub const T: usize = 12;
}

/// Places the frame from the hub angles: `A` at the north pole, `B` at bearing 0,
/// `D, E, F` by counterclockwise turns of `u2, u3, u4` about `A`, and every other
/// point as a Danzer flip completing a rhombus.
pub fn realize_frame(u1: f64, u2: f64, u3: f64, d: f64) -> [SphericalPoint; 13] {
    use label::*;
    let a = [0.0, 0.0, 1.0];
    let b = step(a, [1.0, 0.0, 0.0], d);
    let dv = rotate(b, a, u2);
    let ev = rotate(dv, a, u3);
    let fv = rotate(ev, a, TAU - u1 - u2 - u3);
    let mut p = [SphericalPoint::from_unit(a); 13];
    p[A] = SphericalPoint::from_unit(a);
    p[B] = SphericalPoint::from_unit(b);
    p[D] = SphericalPoint::from_unit(dv);
    p[E] = SphericalPoint::from_unit(ev);
    p[F] = SphericalPoint::from_unit(fv);
    let fl = |x: SphericalPoint, y: SphericalPoint, z: SphericalPoint| {
        flip_image(x, y, z).expect("rhombus diagonal endpoints are distinct")
    };
    p[C] = fl(p[A], p[B], p[D]);
    p[X] = fl(p[A], p[D], p[E]);
    p[W] = fl(p[A], p[E], p[F]);
    p[P] = fl(p[A], p[F], p[B]);
    p[S] = fl(p[B], p[C], p[P]);
    p[R] = fl(p[D], p[C], p[X]);
    p[T] = fl(p[E], p[X], p[W]);
    p[U] = fl(p[F], p[P], p[W]);
    p
}

/// Apex of the equilateral triangle on `x r` on the side away from `away`.
pub fn triangle_apex(
    x: SphericalPoint,
    r: SphericalPoint,
    away: SphericalPoint,
    d: f64,
) -> SphericalPoint {
    let a = alpha_raw(d);
    let c1 = SphericalPoint::from_unit(rotate(r.to_array(), x.to_array(), a));
    let c2 = SphericalPoint::from_unit(rotate(r.to_array(), x.to_array(), -a));
    if crate::geom::angular_dist(c1, away) > crate::geom::angular_dist(c2, away) {
        c1
    } else {
        c2
    }
}

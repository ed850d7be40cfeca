//! Singularity-free guiding vector fields for following planar paths that may
//! cross themselves.
//!
//! A parametric planar path `(f1(w), f2(w))` is lifted into a curve in
//! `(x, y, w)` space by the two surface functions `x - f1(w)` and
//! `y - f2(w)`. The guiding vector field built from that pair never
//! vanishes, so its integral curves converge to the lifted path from every
//! starting point, and their projection onto the plane follows the original
//! path, crossing points included.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: parametric and implicit paths, the surface lift, a catalog.
//! - [`field`]: planar and spatial guiding fields, projection, Jacobians.
//! - [`control`]: the unicycle guidance law and a trajectory-tracking baseline.
//! - [`sim`]: RK4 integration of open- and closed-loop systems, noise, traces.
//! - [`analysis`]: singular points, convergence classification, metrics and
//!   the claim-checking suites behind `gvf verify`.

pub mod analysis;
pub mod control;
pub mod error;
pub mod field;
pub mod geometry;
pub mod sim;

pub use error::{GvfError, Result};

pub use nalgebra::{DMatrix, DVector, Matrix2x3, Matrix3, Vector2, Vector3};

/// Guard below which a vector is treated as zero when normalizing.
pub const EPS_NORM: f64 = 1e-9;

/// 90 degree counter-clockwise rotation `E = [[0, -1], [1, 0]]` applied to `v`.
#[inline]
pub fn rotate90(v: &Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(angle: f64) -> f64 {
    use std::f64::consts::PI;
    if angle > -PI && angle <= PI {
        return angle;
    }
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

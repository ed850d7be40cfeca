//! Unicycle controllers: the guiding-vector-field law and the classic
//! nonlinear trajectory-tracking baseline it is compared against.

mod gvf;
mod tracking;

use serde::{Deserialize, Serialize};

use crate::wrap_angle;

pub use gvf::{gvf_law, heading_error, normalized_planar_jacobian, GvfController, VelocitySource};
pub use tracking::{sinc, traj_track_law, TrackingReference, TrajTrackController};

/// Planar pose of a unicycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnicycleState {
    pub x: f64,
    pub y: f64,
    /// Heading in `(-pi, pi]`.
    pub theta: f64,
}

impl UnicycleState {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn heading(&self) -> nalgebra::Vector2<f64> {
        nalgebra::Vector2::new(self.theta.cos(), self.theta.sin())
    }
}

/// Commands produced by one controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlOutput {
    pub v_u: f64,
    pub omega_u: f64,
    /// Rate of the virtual coordinate; GVF only.
    pub w_dot: Option<f64>,
    /// Signed angle from the field heading to the robot heading; GVF only.
    pub beta: Option<f64>,
}

use serde::{Deserialize, Serialize};

use super::{ControlOutput, UnicycleState};
use crate::error::{GvfError, Result};
use crate::geometry::ParametricPath;
use crate::{wrap_angle, EPS_NORM};

/// Desired pose and feed-forward velocities at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingReference {
    pub x_d: f64,
    pub y_d: f64,
    pub theta_d: f64,
    pub v_d: f64,
    pub omega_d: f64,
}

/// Nonlinear trajectory tracker for a unicycle. The desired trajectory is a
/// parametric path with its parameter replaced by time.
#[derive(Debug, Clone)]
pub struct TrajTrackController {
    k1: f64,
    k2: f64,
    k3: f64,
    desired: ParametricPath,
}

impl TrajTrackController {
    pub fn new(desired: ParametricPath, k1: f64, k2: f64, k3: f64) -> Result<Self> {
        for (key, k) in [("k1t", k1), ("k2t", k2), ("k3t", k3)] {
            if !(k > 0.0 && k.is_finite()) {
                return Err(GvfError::InvalidParameter {
                    key: key.into(),
                    reason: format!("must be positive, got {k}"),
                });
            }
        }
        Ok(Self { k1, k2, k3, desired })
    }

    pub fn gains(&self) -> (f64, f64, f64) {
        (self.k1, self.k2, self.k3)
    }

    pub fn desired(&self) -> &ParametricPath {
        &self.desired
    }

    pub fn reference(&self, t: f64) -> Result<TrackingReference> {
        let c = self.desired.sample(t);
        let speed_sq = c.d1.norm_squared();
        let v_d = speed_sq.sqrt();
        if v_d < EPS_NORM {
            return Err(GvfError::StalledTrajectory { t, v_d });
        }
        Ok(TrackingReference {
            x_d: c.pos.x,
            y_d: c.pos.y,
            theta_d: c.d1.y.atan2(c.d1.x),
            v_d,
            omega_d: (c.d2.y * c.d1.x - c.d2.x * c.d1.y) / speed_sq,
        })
    }

    pub fn command(&self, state: &UnicycleState, t: f64) -> Result<ControlOutput> {
        Ok(traj_track_law(state, &self.reference(t)?, self.gains()))
    }
}

/// `sin(z) / z`, with a Taylor expansion near zero.
pub fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Tracking law on the error expressed in the robot frame. The heading
/// error is wrapped into `(-pi, pi]`.
pub fn traj_track_law(state: &UnicycleState, r: &TrackingReference, gains: (f64, f64, f64)) -> ControlOutput {
    let (k1, k2, k3) = gains;
    let (s, c) = state.theta.sin_cos();
    let (dx, dy) = (r.x_d - state.x, r.y_d - state.y);
    let e1 = c * dx + s * dy;
    let e2 = -s * dx + c * dy;
    let e3 = wrap_angle(r.theta_d - state.theta);
    let u1 = -k1 * e1;
    let u2 = -k2 * r.v_d * e2 * sinc(e3) - k3 * e3;
    ControlOutput {
        v_u: r.v_d * e3.cos() - u1,
        omega_u: r.omega_d - u2,
        w_dot: None,
        beta: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::builtin_parametric;
    use proptest::prelude::*;

    fn reference(x_d: f64, y_d: f64, theta_d: f64) -> TrackingReference {
        TrackingReference { x_d, y_d, theta_d, v_d: 1.0, omega_d: 0.0 }
    }

    #[test]
    fn hand_computed_example() {
        // e' = (1, 2, 0), u1 = -1, u2 = -1*1*2*1 - 0 = -2, v = 1 + 1, omega = 0 + 2
        let out = traj_track_law(&UnicycleState::new(0.0, 0.0, 0.0), &reference(1.0, 2.0, 0.0), (1.0, 1.0, 1.0));
        assert_eq!(out.v_u, 2.0);
        assert_eq!(out.omega_u, 2.0);
        assert_eq!(out.w_dot, None);
    }

    #[test]
    fn rotated_error_frame() {
        // robot facing +y; world error (1, 2) is (2, -1) in the robot frame.
        // v = 1*cos0 + e1 = 1 + 2; omega = -u2 = 1*1*(-1) = -1
        let state = UnicycleState::new(0.0, 0.0, std::f64::consts::FRAC_PI_2);
        let out = traj_track_law(&state, &reference(1.0, 2.0, state.theta), (1.0, 1.0, 1.0));
        assert!((out.v_u - 3.0).abs() < 1e-12);
        assert!((out.omega_u + 1.0).abs() < 1e-12);
    }

    #[test]
    fn sinc_taylor_branch_is_continuous() {
        assert_eq!(sinc(0.0), 1.0);
        for z in [9.9e-5, 1e-4, 1.01e-4, -1e-4] {
            assert!((sinc(z) - z.sin() / z).abs() < 1e-15);
        }
    }

    #[test]
    fn lissajous_reference() {
        let path = builtin_parametric("lissajous", &[]).unwrap();
        let ctrl = TrajTrackController::new(path.clone(), 0.05, 0.05, 1.0).unwrap();
        let r = ctrl.reference(2.0).unwrap();
        let c = path.sample(2.0);
        assert_eq!((r.x_d, r.y_d), (c.pos.x, c.pos.y));
        assert!((r.v_d - c.d1.norm()).abs() < 1e-12);
        // omega_d equals the time derivative of theta_d
        let h = 1e-5;
        let fd = crate::wrap_angle(ctrl.reference(2.0 + h).unwrap().theta_d - ctrl.reference(2.0 - h).unwrap().theta_d) / (2.0 * h);
        assert!((fd - r.omega_d).abs() < 1e-6);
    }

    #[test]
    fn stalled_trajectory() {
        let still = builtin_parametric("line", &[0.0, 0.0, 0.0, 0.0]).unwrap();
        let ctrl = TrajTrackController::new(still, 1.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            ctrl.command(&UnicycleState::new(0.0, 0.0, 0.0), 1.0),
            Err(GvfError::StalledTrajectory { .. })
        ));
        let path = builtin_parametric("circle", &[]).unwrap();
        assert!(TrajTrackController::new(path, 0.0, 1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn zero_error_is_pure_feedforward(t in 0.0f64..300.0) {
            let path = builtin_parametric("lissajous", &[]).unwrap();
            let ctrl = TrajTrackController::new(path, 0.05, 0.05, 1.0).unwrap();
            let r = ctrl.reference(t).unwrap();
            let out = ctrl.command(&UnicycleState::new(r.x_d, r.y_d, r.theta_d), t).unwrap();
            prop_assert!((out.v_u - r.v_d).abs() < 1e-12 * r.v_d.max(1.0));
            prop_assert!((out.omega_u - r.omega_d).abs() < 1e-12);
        }
    }
}

use nalgebra::{Matrix2x3, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::{ControlOutput, UnicycleState};
use crate::error::{GvfError, Result};
use crate::field::{JacobianMode, SpatialField};
use crate::{rotate90, EPS_NORM};

/// Which planar velocity enters the generalized velocity used for the
/// feed-forward heading rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocitySource {
    /// Velocity reported by the plant (odometry), as on a real robot.
    #[default]
    Measured,
    /// `v_u * (cos theta, sin theta)` from the command being computed.
    Commanded,
}

/// Guiding-vector-field controller for a unicycle. Owns the virtual
/// coordinate `w`.
#[derive(Debug, Clone)]
pub struct GvfController {
    field: SpatialField,
    s: f64,
    k_theta: f64,
    w: f64,
    velocity_source: VelocitySource,
    jacobian_mode: JacobianMode,
}

impl GvfController {
    pub fn new(field: SpatialField, s: f64, k_theta: f64, w0: f64) -> Result<Self> {
        for (key, v) in [("s", s), ("k_theta", k_theta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GvfError::InvalidParameter {
                    key: key.into(),
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        if !w0.is_finite() {
            return Err(GvfError::InvalidParameter {
                key: "w".into(),
                reason: "must be finite".into(),
            });
        }
        Ok(Self {
            field,
            s,
            k_theta,
            w: w0,
            velocity_source: VelocitySource::default(),
            jacobian_mode: JacobianMode::default(),
        })
    }

    pub fn with_velocity_source(mut self, source: VelocitySource) -> Self {
        self.velocity_source = source;
        self
    }

    pub fn with_jacobian_mode(mut self, mode: JacobianMode) -> Self {
        self.jacobian_mode = mode;
        self
    }

    pub fn field(&self) -> &SpatialField {
        &self.field
    }

    pub fn speed(&self) -> f64 {
        self.s
    }

    pub fn k_theta(&self) -> f64 {
        self.k_theta
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn set_w(&mut self, w: f64) {
        self.w = w;
    }

    /// Forward-Euler update `w <- w + w_dot * dt`.
    pub fn advance(&mut self, w_dot: f64, dt: f64) {
        self.w += w_dot * dt;
    }

    pub fn generalized_position(&self, state: &UnicycleState) -> Vector3<f64> {
        Vector3::new(state.x, state.y, self.w)
    }

    /// Evaluates the control law at `state` with the current `w`.
    pub fn command(&self, state: &UnicycleState, measured_velocity: &Vector2<f64>) -> Result<ControlOutput> {
        let p = self.generalized_position(state);
        let chi = self.field.chi(&p);
        let jac = self.field.jacobian_chi_p_with(&p, self.jacobian_mode)?;
        let velocity = match self.velocity_source {
            VelocitySource::Measured => Some(*measured_velocity),
            VelocitySource::Commanded => None,
        };
        gvf_law(&p, &chi, &jac, state.theta, velocity, self.s, self.k_theta)
    }
}

/// Jacobian of `(chi1, chi2) / ||chi||` from `chi` and its Jacobian.
pub fn normalized_planar_jacobian(chi: &Vector3<f64>, jac_chi: &Matrix3<f64>) -> Matrix2x3<f64> {
    let n = chi.norm();
    let radial = chi.transpose() * jac_chi;
    Matrix2x3::from_fn(|i, j| jac_chi[(i, j)] / n - chi[i] * radial[j] / (n * n * n))
}

/// The guidance law itself, given the field value `chi` at the generalized
/// position `p` and the Jacobian of its normalized planar part.
///
/// `planar_velocity = None` uses the commanded velocity `v_u h`.
pub fn gvf_law(
    p: &Vector3<f64>,
    chi: &Vector3<f64>,
    jac_chi_p: &Matrix2x3<f64>,
    theta: f64,
    planar_velocity: Option<Vector2<f64>>,
    s: f64,
    k_theta: f64,
) -> Result<ControlOutput> {
    let planar_sq = chi.x * chi.x + chi.y * chi.y;
    if planar_sq <= EPS_NORM * EPS_NORM {
        return Err(GvfError::SingularHeading {
            x: p.x,
            y: p.y,
            w: p.z,
            norm_sq: planar_sq,
        });
    }
    let chi_hat = chi / chi.norm();
    let chi_p = chi_hat.xy();
    let chi_p_norm = chi_p.norm();
    let chi_p_hat = chi_p / chi_p_norm;
    let h = Vector2::new(theta.cos(), theta.sin());

    let w_dot = s * chi_hat.z;
    let v_u = s * chi_p_norm;
    let xy_dot = planar_velocity.unwrap_or(h * v_u);
    let p_dot = Vector3::new(xy_dot.x, xy_dot.y, w_dot);
    let theta_d_dot = -chi_p_hat.dot(&rotate90(&(jac_chi_p * p_dot))) / chi_p_norm;
    let alignment = h.dot(&rotate90(&chi_p_hat));
    let omega_u = theta_d_dot - k_theta * alignment;
    let beta = alignment.atan2(h.dot(&chi_p_hat));
    Ok(ControlOutput {
        v_u,
        omega_u,
        w_dot: Some(w_dot),
        beta: Some(if beta == -std::f64::consts::PI { std::f64::consts::PI } else { beta }),
    })
}

/// Signed angle from `chi_p_hat` to `h_hat`, in `(-pi, pi]`.
pub fn heading_error(h_hat: &Vector2<f64>, chi_p_hat: &Vector2<f64>) -> Result<f64> {
    for (name, v) in [("h_hat", h_hat), ("chi_p_hat", chi_p_hat)] {
        if (v.norm() - 1.0).abs() > 1e-9 {
            return Err(GvfError::Contract(format!("{name} must be a unit vector, norm = {}", v.norm())));
        }
    }
    let beta = h_hat.dot(&rotate90(chi_p_hat)).atan2(h_hat.dot(chi_p_hat));
    Ok(if beta == -std::f64::consts::PI { std::f64::consts::PI } else { beta })
}

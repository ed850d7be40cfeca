use nalgebra::{Matrix3, Vector3};

use crate::error::{GvfError, Result};

/// Orthogonal projection onto the plane normal to `a`: `I - a_hat a_hat^T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOperator {
    axis: Vector3<f64>,
    matrix: Matrix3<f64>,
}

impl ProjectionOperator {
    pub fn new(axis: Vector3<f64>) -> Result<Self> {
        let n = axis.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(GvfError::InvalidParameter {
                key: "axis".into(),
                reason: "projection axis must be a nonzero finite vector".into(),
            });
        }
        let a = axis / n;
        Ok(Self {
            axis,
            matrix: Matrix3::identity() - a * a.transpose(),
        })
    }

    /// Projection that zeroes the `w` coordinate.
    pub fn drop_w() -> Self {
        Self::new(Vector3::z()).expect("unit axis")
    }

    pub fn axis(&self) -> Vector3<f64> {
        self.axis
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    #[inline]
    pub fn project(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * p
    }
}

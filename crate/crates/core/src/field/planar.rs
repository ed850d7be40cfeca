use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{GvfError, Result};
use crate::geometry::ImplicitPath2D;
use crate::rotate90;

/// Strictly increasing shaping function with `psi(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Psi {
    #[default]
    Identity,
    /// `scale * tanh(phi / scale)`; saturates the converging term far away.
    Tanh { scale: f64 },
}

impl Psi {
    #[inline]
    pub fn apply(&self, phi: f64) -> f64 {
        match *self {
            Psi::Identity => phi,
            Psi::Tanh { scale } => scale * (phi / scale).tanh(),
        }
    }
}

/// Planar guiding field `E grad(phi) - k psi(phi) grad(phi)`.
#[derive(Debug, Clone)]
pub struct PlanarField {
    path: ImplicitPath2D,
    k: f64,
    psi: Psi,
}

impl PlanarField {
    pub fn new(path: ImplicitPath2D, k: f64, psi: Psi) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(GvfError::InvalidParameter {
                key: "k".into(),
                reason: format!("must be positive, got {k}"),
            });
        }
        if let Psi::Tanh { scale } = psi {
            if scale.is_nan() || scale <= 0.0 {
                return Err(GvfError::InvalidParameter {
                    key: "psi.scale".into(),
                    reason: format!("must be positive, got {scale}"),
                });
            }
        }
        Ok(Self { path, k, psi })
    }

    pub fn path(&self) -> &ImplicitPath2D {
        &self.path
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn psi(&self) -> Psi {
        self.psi
    }

    pub fn eval(&self, q: &Vector2<f64>) -> Vector2<f64> {
        let phi = self.path.phi(q);
        let g = self.path.grad_phi(q);
        rotate90(&g) - self.k * self.psi.apply(phi) * g
    }
}

//! Guiding vector fields.
//!
//! [`PlanarField`] is the classic 2D field built from one implicit surface
//! function; it necessarily vanishes at crossing points of its path.
//! [`SpatialField`] is the 3D field built from the lifted surface pair and has
//! no zeros anywhere. [`ProjectionOperator`] maps the 3D picture back down.

mod planar;
mod projection;
mod spatial;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

pub use planar::{PlanarField, Psi};
pub use projection::ProjectionOperator;
pub use spatial::{FieldTerms, JacobianMode, SpatialField};

/// Axis-aligned box in `(x, y, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb3 {
    pub min: Vector3<f64>,
    pub max: Vector3<f64>,
}

impl Aabb3 {
    pub fn new(min: Vector3<f64>, max: Vector3<f64>) -> Self {
        Self { min, max }
    }

    /// The cube `[lo, hi]^3`.
    pub fn cube(lo: f64, hi: f64) -> Self {
        Self::new(Vector3::repeat(lo), Vector3::repeat(hi))
    }

    /// Iterates a uniform `grid^3` lattice including both faces.
    pub fn lattice(&self, grid: usize) -> impl Iterator<Item = Vector3<f64>> + '_ {
        let n = grid.max(2);
        let step = (self.max - self.min) / (n - 1) as f64;
        (0..n * n * n).map(move |idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            self.min + Vector3::new(step.x * i as f64, step.y * j as f64, step.z * k as f64)
        })
    }
}

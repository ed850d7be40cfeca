use nalgebra::{Matrix2x3, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::Aabb3;
use crate::error::{GvfError, Result};
use crate::geometry::{lift_to_surfaces, ParametricPath, SurfacePair};
use crate::EPS_NORM;

/// Propagation and converging parts of the 3D field at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTerms {
    pub chi: Vector3<f64>,
    /// `grad(phi1) x grad(phi2)`; its third entry is always 1.
    pub tau: Vector3<f64>,
    /// `-k1 phi1 grad(phi1) - k2 phi2 grad(phi2)`.
    pub iota: Vector3<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianMode {
    #[default]
    Analytic,
    FiniteDifference,
}

/// 3D guiding vector field of a lifted parametric path.
#[derive(Debug, Clone)]
pub struct SpatialField {
    surfaces: SurfacePair,
    k1: f64,
    k2: f64,
}

impl SpatialField {
    pub fn new(surfaces: SurfacePair, k1: f64, k2: f64) -> Result<Self> {
        for (key, k) in [("k1", k1), ("k2", k2)] {
            if !(k > 0.0 && k.is_finite()) {
                return Err(GvfError::InvalidParameter {
                    key: key.into(),
                    reason: format!("must be positive, got {k}"),
                });
            }
        }
        Ok(Self { surfaces, k1, k2 })
    }

    pub fn from_path(path: &ParametricPath, k1: f64, k2: f64) -> Result<Self> {
        Self::new(lift_to_surfaces(path), k1, k2)
    }

    pub fn surfaces(&self) -> &SurfacePair {
        &self.surfaces
    }

    pub fn path(&self) -> &ParametricPath {
        self.surfaces.source()
    }

    pub fn gains(&self) -> (f64, f64) {
        (self.k1, self.k2)
    }

    /// Generic construction from the surface gradients.
    pub fn eval(&self, p: &Vector3<f64>) -> FieldTerms {
        let s = self.surfaces.eval(p);
        let tau = s.grad_phi1.cross(&s.grad_phi2);
        let iota = s.grad_phi1 * (-self.k1 * s.phi1) + s.grad_phi2 * (-self.k2 * s.phi2);
        FieldTerms {
            chi: tau + iota,
            tau,
            iota,
        }
    }

    /// `(f1' - k1 phi1, f2' - k2 phi2, 1 + k1 phi1 f1' + k2 phi2 f2')`.
    pub fn chi(&self, p: &Vector3<f64>) -> Vector3<f64> {
        let c = self.path().sample(p.z);
        let (phi1, phi2) = (p.x - c.pos.x, p.y - c.pos.y);
        let (a, b) = (c.d1.x, c.d1.y);
        Vector3::new(
            a - self.k1 * phi1,
            b - self.k2 * phi2,
            1.0 + (self.k1 * phi1 * a + self.k2 * phi2 * b),
        )
    }

    /// Jacobian of the closed-form `chi` with respect to `(x, y, w)`.
    pub fn jacobian(&self, p: &Vector3<f64>) -> Matrix3<f64> {
        let c = self.path().sample(p.z);
        let (phi1, phi2) = (p.x - c.pos.x, p.y - c.pos.y);
        let (a, b) = (c.d1.x, c.d1.y);
        let (aa, bb) = (c.d2.x, c.d2.y);
        let (k1, k2) = (self.k1, self.k2);
        Matrix3::new(
            -k1, 0.0, aa + k1 * a,
            0.0, -k2, bb + k2 * b,
            k1 * a, k2 * b, k1 * (phi1 * aa - a * a) + k2 * (phi2 * bb - b * b),
        )
    }

    /// Planar part of the normalized field, `(chi1, chi2) / ||chi||`.
    pub fn chi_p(&self, p: &Vector3<f64>) -> Vector2<f64> {
        let chi = self.chi(p);
        chi.xy() / chi.norm()
    }

    fn heading_guard(&self, p: &Vector3<f64>, chi: &Vector3<f64>) -> Result<()> {
        let planar_sq = chi.x * chi.x + chi.y * chi.y;
        if planar_sq <= EPS_NORM * EPS_NORM {
            return Err(GvfError::SingularHeading {
                x: p.x,
                y: p.y,
                w: p.z,
                norm_sq: planar_sq,
            });
        }
        Ok(())
    }

    /// Analytic Jacobian of [`chi_p`](Self::chi_p) with respect to `(x, y, w)`.
    pub fn jacobian_chi_p(&self, p: &Vector3<f64>) -> Result<Matrix2x3<f64>> {
        let chi = self.chi(p);
        self.heading_guard(p, &chi)?;
        let jac = self.jacobian(p);
        let n = chi.norm();
        // d(chi_i / n) = d chi_i / n - chi_i (chi . d chi) / n^3
        let radial = chi.transpose() * jac;
        let mut out = Matrix2x3::zeros();
        for i in 0..2 {
            for j in 0..3 {
                out[(i, j)] = jac[(i, j)] / n - chi[i] * radial[j] / (n * n * n);
            }
        }
        Ok(out)
    }

    /// Central-difference Jacobian of `chi_p` with step `1e-6 (1 + ||p||)`.
    pub fn jacobian_chi_p_fd(&self, p: &Vector3<f64>) -> Result<Matrix2x3<f64>> {
        let chi = self.chi(p);
        self.heading_guard(p, &chi)?;
        let h = 1e-6 * (1.0 + p.norm());
        let mut out = Matrix2x3::zeros();
        for j in 0..3 {
            let mut e = Vector3::zeros();
            e[j] = h;
            let col = (self.chi_p(&(p + e)) - self.chi_p(&(p - e))) / (2.0 * h);
            out.set_column(j, &col);
        }
        Ok(out)
    }

    pub fn jacobian_chi_p_with(&self, p: &Vector3<f64>, mode: JacobianMode) -> Result<Matrix2x3<f64>> {
        match mode {
            JacobianMode::Analytic => self.jacobian_chi_p(p),
            JacobianMode::FiniteDifference => self.jacobian_chi_p_fd(p),
        }
    }

    /// Smallest `||chi||` over a `grid^3` lattice of `region`.
    pub fn min_field_norm(&self, region: &Aabb3, grid: usize) -> f64 {
        region
            .lattice(grid)
            .map(|p| self.eval(&p).chi.norm())
            .fold(f64::INFINITY, f64::min)
    }
}

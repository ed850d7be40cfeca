use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{GvfError, Result};
use crate::field::PlanarField;

/// Residual below which a Newton iterate counts as a root.
pub const ROOT_RESIDUAL: f64 = 1e-10;
const MAX_NEWTON_ITERS: usize = 50;
const MAX_HALVINGS: usize = 40;

/// Axis-aligned rectangle in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb2 {
    pub min: Vector2<f64>,
    pub max: Vector2<f64>,
}

impl Aabb2 {
    pub fn new(min: Vector2<f64>, max: Vector2<f64>) -> Self {
        Self { min, max }
    }

    pub fn square(lo: f64, hi: f64) -> Self {
        Self::new(Vector2::repeat(lo), Vector2::repeat(hi))
    }

    pub fn contains(&self, q: &Vector2<f64>, slack: f64) -> bool {
        (0..2).all(|i| q[i] >= self.min[i] - slack && q[i] <= self.max[i] + slack)
    }

    /// Node `(i, j)` of a `grid x grid` lattice including both edges.
    pub fn node(&self, grid: usize, i: usize, j: usize) -> Vector2<f64> {
        let step = (self.max - self.min) / (grid - 1) as f64;
        self.min + Vector2::new(step.x * i as f64, step.y * j as f64)
    }
}

/// Zeros of a planar field inside `region`.
///
/// Lattice nodes where `||chi||` is no larger than at any neighbour seed a
/// damped Newton iteration with a central-difference Jacobian. Seeds that do
/// not reach a residual below [`ROOT_RESIDUAL`] within 50 iterations are
/// dropped, as are roots outside the region. Roots closer than `tol` are
/// merged.
pub fn find_singular_points_2d(field: &PlanarField, region: &Aabb2, grid: usize, tol: f64) -> Result<Vec<Vector2<f64>>> {
    if grid < 8 {
        return Err(GvfError::InvalidParameter {
            key: "grid".into(),
            reason: format!("must be at least 8, got {grid}"),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(GvfError::InvalidParameter {
            key: "tol".into(),
            reason: format!("must be positive, got {tol}"),
        });
    }
    let norms: Vec<f64> = (0..grid * grid)
        .map(|idx| field.eval(&region.node(grid, idx / grid, idx % grid)).norm())
        .collect();
    let at = |i: usize, j: usize| norms[i * grid + j];

    let mut roots: Vec<Vector2<f64>> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let v = at(i, j);
            let is_min = (i.saturating_sub(1)..=(i + 1).min(grid - 1))
                .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(grid - 1)).map(move |b| (a, b)))
                .all(|(a, b)| at(a, b) >= v);
            if !is_min {
                continue;
            }
            let Some(root) = newton(field, region.node(grid, i, j)) else {
                continue;
            };
            if region.contains(&root, tol) && roots.iter().all(|r| (r - root).norm() > tol) {
                roots.push(root);
            }
        }
    }
    roots.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    Ok(roots)
}

fn numeric_jacobian(field: &PlanarField, q: &Vector2<f64>) -> Matrix2<f64> {
    let h = 1e-7 * (1.0 + q.norm());
    let mut jac = Matrix2::zeros();
    for k in 0..2 {
        let mut e = Vector2::zeros();
        e[k] = h;
        let col = (field.eval(&(q + e)) - field.eval(&(q - e))) / (2.0 * h);
        jac.set_column(k, &col);
    }
    jac
}

fn newton(field: &PlanarField, seed: Vector2<f64>) -> Option<Vector2<f64>> {
    let mut q = seed;
    let mut f = field.eval(&q);
    for _ in 0..MAX_NEWTON_ITERS {
        if f.norm() < ROOT_RESIDUAL {
            return Some(q);
        }
        let step = numeric_jacobian(field, &q).try_inverse()? * f;
        let mut scale = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial = q - step * scale;
            let ft = field.eval(&trial);
            if ft.norm() < f.norm() {
                q = trial;
                f = ft;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (f.norm() < ROOT_RESIDUAL).then_some(q)
}

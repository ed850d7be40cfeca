//! Desired paths: parametric and implicit planar curves, the lift of a
//! parametric curve into a pair of surface functions in `(x, y, w)`, and a
//! catalog of built-in paths.

mod catalog;
pub(crate) mod distance;

use std::fmt;
use std::sync::Arc;

use nalgebra::{Vector2, Vector3};

pub use catalog::{
    builtin_implicit, builtin_parametric, builtin_path, CatalogPath, Circle, CircleImplicit,
    Figure8Implicit, Lemniscate, Line, Lissajous, TrefoilProjection, IMPLICIT_NAMES,
    PARAMETRIC_NAMES, PATH_NAMES,
};
pub use distance::{distance_to_lifted, distance_to_path, golden_min, PathSampler};

/// Position and first two derivatives of a parametric curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub pos: Vector2<f64>,
    pub d1: Vector2<f64>,
    pub d2: Vector2<f64>,
}

/// A twice continuously differentiable planar curve `w -> (f1(w), f2(w))`.
pub trait Curve: Send + Sync + fmt::Debug {
    fn sample(&self, w: f64) -> CurveSample;
}

/// A parametric planar path together with a parameter interval that covers it.
#[derive(Clone)]
pub struct ParametricPath {
    name: String,
    curve: Arc<dyn Curve>,
    param_hint: (f64, f64),
}

impl fmt::Debug for ParametricPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricPath")
            .field("name", &self.name)
            .field("curve", &self.curve)
            .field("param_hint", &self.param_hint)
            .finish()
    }
}

impl ParametricPath {
    pub fn new(name: impl Into<String>, curve: impl Curve + 'static, param_hint: (f64, f64)) -> Self {
        Self {
            name: name.into(),
            curve: Arc::new(curve),
            param_hint,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Suggested parameter interval for sampling and plotting.
    pub fn param_hint(&self) -> (f64, f64) {
        self.param_hint
    }

    #[inline]
    pub fn sample(&self, w: f64) -> CurveSample {
        self.curve.sample(w)
    }

    #[inline]
    pub fn point(&self, w: f64) -> Vector2<f64> {
        self.curve.sample(w).pos
    }

    pub fn f1(&self, w: f64) -> f64 {
        self.point(w).x
    }

    pub fn f2(&self, w: f64) -> f64 {
        self.point(w).y
    }

    pub fn df1(&self, w: f64) -> f64 {
        self.sample(w).d1.x
    }

    pub fn df2(&self, w: f64) -> f64 {
        self.sample(w).d1.y
    }

    pub fn ddf1(&self, w: f64) -> f64 {
        self.sample(w).d2.x
    }

    pub fn ddf2(&self, w: f64) -> f64 {
        self.sample(w).d2.y
    }

    /// Same curve under `q -> scale * (q - center)`, keeping the parameter.
    pub fn affine(&self, center: Vector2<f64>, scale: f64) -> Self {
        Self {
            name: self.name.clone(),
            curve: Arc::new(Affine {
                inner: Arc::clone(&self.curve),
                center,
                scale,
            }),
            param_hint: self.param_hint,
        }
    }

    /// Rescales the path so that its bounding box over `param_hint` is
    /// centered at the origin with largest half-extent 1.
    pub fn rescaled_to_unit_box(&self) -> Self {
        let (lo, hi) = self.param_hint;
        let n = 4096;
        let mut min = Vector2::repeat(f64::INFINITY);
        let mut max = Vector2::repeat(f64::NEG_INFINITY);
        for i in 0..=n {
            let w = lo + (hi - lo) * i as f64 / n as f64;
            let p = self.point(w);
            min = min.inf(&p);
            max = max.sup(&p);
        }
        let center = (min + max) * 0.5;
        let half = ((max - min) * 0.5).max();
        let scale = if half > 0.0 { 1.0 / half } else { 1.0 };
        self.affine(center, scale)
    }
}

#[derive(Debug)]
struct Affine {
    inner: Arc<dyn Curve>,
    center: Vector2<f64>,
    scale: f64,
}

impl Curve for Affine {
    fn sample(&self, w: f64) -> CurveSample {
        let s = self.inner.sample(w);
        CurveSample {
            pos: (s.pos - self.center) * self.scale,
            d1: s.d1 * self.scale,
            d2: s.d2 * self.scale,
        }
    }
}

/// A planar path given as the zero level set of a surface function.
pub trait ImplicitCurve: Send + Sync + fmt::Debug {
    fn phi(&self, q: &Vector2<f64>) -> f64;
    fn grad(&self, q: &Vector2<f64>) -> Vector2<f64>;
}

#[derive(Clone)]
pub struct ImplicitPath2D {
    name: String,
    surface: Arc<dyn ImplicitCurve>,
}

impl fmt::Debug for ImplicitPath2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitPath2D")
            .field("name", &self.name)
            .field("surface", &self.surface)
            .finish()
    }
}

impl ImplicitPath2D {
    pub fn new(name: impl Into<String>, surface: impl ImplicitCurve + 'static) -> Self {
        Self {
            name: name.into(),
            surface: Arc::new(surface),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn phi(&self, q: &Vector2<f64>) -> f64 {
        self.surface.phi(q)
    }

    #[inline]
    pub fn grad_phi(&self, q: &Vector2<f64>) -> Vector2<f64> {
        self.surface.grad(q)
    }
}

/// The two surface functions `phi1 = x - f1(w)` and `phi2 = y - f2(w)` whose
/// common zero set is the parametric path stretched along `w`.
#[derive(Debug, Clone)]
pub struct SurfacePair {
    source: ParametricPath,
}

/// Values and gradients of both surface functions at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceEval {
    pub phi1: f64,
    pub phi2: f64,
    pub grad_phi1: Vector3<f64>,
    pub grad_phi2: Vector3<f64>,
    /// Curve sample at `w`, kept for callers that need `f'` and `f''`.
    pub curve: CurveSample,
}

impl SurfacePair {
    pub fn source(&self) -> &ParametricPath {
        &self.source
    }

    pub fn eval(&self, p: &Vector3<f64>) -> SurfaceEval {
        let c = self.source.sample(p.z);
        SurfaceEval {
            phi1: p.x - c.pos.x,
            phi2: p.y - c.pos.y,
            grad_phi1: Vector3::new(1.0, 0.0, -c.d1.x),
            grad_phi2: Vector3::new(0.0, 1.0, -c.d1.y),
            curve: c,
        }
    }

    pub fn phi1(&self, p: &Vector3<f64>) -> f64 {
        p.x - self.source.f1(p.z)
    }

    pub fn phi2(&self, p: &Vector3<f64>) -> f64 {
        p.y - self.source.f2(p.z)
    }

    pub fn grad_phi1(&self, p: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(1.0, 0.0, -self.source.df1(p.z))
    }

    pub fn grad_phi2(&self, p: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(0.0, 1.0, -self.source.df2(p.z))
    }

    /// Path-following error `(phi1, phi2)`.
    pub fn error(&self, p: &Vector3<f64>) -> Vector2<f64> {
        let c = self.source.point(p.z);
        Vector2::new(p.x - c.x, p.y - c.y)
    }

    /// Point of the lifted path at parameter `w`.
    pub fn lifted_point(&self, w: f64) -> Vector3<f64> {
        let c = self.source.point(w);
        Vector3::new(c.x, c.y, w)
    }
}

/// Lifts a parametric planar path into the surface pair `(x - f1(w), y - f2(w))`.
pub fn lift_to_surfaces(path: &ParametricPath) -> SurfacePair {
    SurfacePair {
        source: path.clone(),
    }
}

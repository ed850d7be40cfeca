use std::f64::consts::PI;

use nalgebra::Vector2;

use super::{Curve, CurveSample, ImplicitCurve, ImplicitPath2D, ParametricPath};
use crate::error::{GvfError, Result};

/// Every name accepted by [`builtin_path`].
pub const PATH_NAMES: [&str; 6] = [
    "circle",
    "line",
    "figure8_implicit",
    "lemniscate",
    "trefoil_projection",
    "lissajous",
];

pub const PARAMETRIC_NAMES: [&str; 5] = [
    "circle",
    "line",
    "lemniscate",
    "trefoil_projection",
    "lissajous",
];

/// Names accepted by [`builtin_implicit`]; `circle` resolves to `x^2 + y^2 - r^2`.
pub const IMPLICIT_NAMES: [&str; 2] = ["figure8_implicit", "circle"];

#[derive(Debug, Clone)]
pub enum CatalogPath {
    Parametric(ParametricPath),
    Implicit(ImplicitPath2D),
}

impl CatalogPath {
    pub fn into_parametric(self) -> Option<ParametricPath> {
        match self {
            CatalogPath::Parametric(p) => Some(p),
            CatalogPath::Implicit(_) => None,
        }
    }

    pub fn into_implicit(self) -> Option<ImplicitPath2D> {
        match self {
            CatalogPath::Implicit(p) => Some(p),
            CatalogPath::Parametric(_) => None,
        }
    }
}

/// Looks up a catalog path. `params` overrides the leading default parameters
/// of the entry (see each curve type for the order); an empty slice gives the
/// defaults.
pub fn builtin_path(name: &str, params: &[f64]) -> Result<CatalogPath> {
    match name {
        "figure8_implicit" => builtin_implicit(name, params).map(CatalogPath::Implicit),
        _ => builtin_parametric(name, params).map(CatalogPath::Parametric),
    }
}

pub fn builtin_parametric(name: &str, params: &[f64]) -> Result<ParametricPath> {
    let path = match name {
        "circle" => {
            let [radius, cx, cy] = fill(name, params, [1.0, 0.0, 0.0])?;
            ParametricPath::new(name, Circle { radius, center: Vector2::new(cx, cy) }, (0.0, 2.0 * PI))
        }
        "line" => {
            let [x0, y0, dx, dy] = fill(name, params, [0.0, 0.0, 1.0, 0.0])?;
            ParametricPath::new(
                name,
                Line { origin: Vector2::new(x0, y0), direction: Vector2::new(dx, dy) },
                (-10.0, 10.0),
            )
        }
        "lemniscate" => {
            let [scale] = fill(name, params, [1.0])?;
            ParametricPath::new(name, Lemniscate { scale }, (0.0, 2.0 * PI))
        }
        "trefoil_projection" => {
            let [amplitude, offset, outer_freq, inner_freq, cx, cy] =
                fill(name, params, [80.0, 160.0, 0.02, 0.03, 600.0, 350.0])?;
            let curve = TrefoilProjection {
                amplitude,
                offset,
                outer_freq,
                inner_freq,
                center: Vector2::new(cx, cy),
            };
            let hint = (0.0, closed_period(outer_freq, inner_freq));
            ParametricPath::new(name, curve, hint)
        }
        "lissajous" => {
            let [ax, fx, px, cx, ay, fy, py, cy] =
                fill(name, params, [250.0, 0.06, 0.1, 600.0, 250.0, 0.08, 0.7, 350.0])?;
            let curve = Lissajous {
                amplitude: Vector2::new(ax, ay),
                freq: Vector2::new(fx, fy),
                phase: Vector2::new(px, py),
                center: Vector2::new(cx, cy),
            };
            ParametricPath::new(name, curve, (0.0, closed_period(fx, fy)))
        }
        _ => {
            return Err(GvfError::UnknownPath {
                name: name.to_string(),
                valid: PARAMETRIC_NAMES.to_vec(),
            })
        }
    };
    Ok(path)
}

pub fn builtin_implicit(name: &str, params: &[f64]) -> Result<ImplicitPath2D> {
    match name {
        "figure8_implicit" => {
            let [] = fill(name, params, [])?;
            Ok(ImplicitPath2D::new(name, Figure8Implicit))
        }
        "circle" => {
            let [radius] = fill(name, params, [1.0])?;
            Ok(ImplicitPath2D::new(name, CircleImplicit { radius }))
        }
        _ => Err(GvfError::UnknownPath {
            name: name.to_string(),
            valid: IMPLICIT_NAMES.to_vec(),
        }),
    }
}

fn fill<const N: usize>(name: &str, params: &[f64], defaults: [f64; N]) -> Result<[f64; N]> {
    if params.len() > N {
        return Err(GvfError::BadPathParams {
            name: name.to_string(),
            max: N,
            got: params.len(),
        });
    }
    let mut out = defaults;
    out[..params.len()].copy_from_slice(params);
    Ok(out)
}

/// Smallest `T > 0` with `a*T` and `b*T` both multiples of `2*pi`, for
/// frequencies whose ratio is a small rational. Falls back to the slower
/// period when no ratio with denominator <= 1000 is found.
fn closed_period(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    let ratio = a / b;
    for q in 1..=1000u32 {
        let p = (ratio * q as f64).round();
        if p >= 1.0 && (ratio * q as f64 - p).abs() < 1e-9 * q as f64 {
            // a/b = p/q, so T = 2*pi*q/b = 2*pi*p/a.
            return 2.0 * PI * q as f64 / b;
        }
    }
    2.0 * PI / a.min(b)
}

/// Value and first two derivatives of a scalar function.
#[derive(Clone, Copy)]
struct Jet {
    v: f64,
    d1: f64,
    d2: f64,
}

impl Jet {
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }

    fn div(self, o: Jet) -> Jet {
        let q = self.v / o.v;
        let q1 = (self.d1 - q * o.d1) / o.v;
        let q2 = (self.d2 - 2.0 * q1 * o.d1 - q * o.d2) / o.v;
        Jet { v: q, d1: q1, d2: q2 }
    }

    fn cos(freq: f64, phase: f64, w: f64) -> Jet {
        let (s, c) = (freq * w + phase).sin_cos();
        Jet { v: c, d1: -freq * s, d2: -freq * freq * c }
    }

    fn sin(freq: f64, phase: f64, w: f64) -> Jet {
        let (s, c) = (freq * w + phase).sin_cos();
        Jet { v: s, d1: freq * c, d2: -freq * freq * s }
    }
}

fn sample_from(x: Jet, y: Jet) -> CurveSample {
    CurveSample {
        pos: Vector2::new(x.v, y.v),
        d1: Vector2::new(x.d1, y.d1),
        d2: Vector2::new(x.d2, y.d2),
    }
}

/// `center + radius * (cos w, sin w)`.
#[derive(Debug, Clone)]
pub struct Circle {
    pub radius: f64,
    pub center: Vector2<f64>,
}

impl Curve for Circle {
    fn sample(&self, w: f64) -> CurveSample {
        let (s, c) = w.sin_cos();
        let r = self.radius;
        CurveSample {
            pos: self.center + Vector2::new(r * c, r * s),
            d1: Vector2::new(-r * s, r * c),
            d2: Vector2::new(-r * c, -r * s),
        }
    }
}

/// `origin + w * direction`.
#[derive(Debug, Clone)]
pub struct Line {
    pub origin: Vector2<f64>,
    pub direction: Vector2<f64>,
}

impl Curve for Line {
    fn sample(&self, w: f64) -> CurveSample {
        CurveSample {
            pos: self.origin + self.direction * w,
            d1: self.direction,
            d2: Vector2::zeros(),
        }
    }
}

/// Lemniscate of Bernoulli, `x = a cos w / (1 + sin^2 w)`,
/// `y = a sin w cos w / (1 + sin^2 w)`. Crosses itself at the origin.
#[derive(Debug, Clone)]
pub struct Lemniscate {
    pub scale: f64,
}

impl Curve for Lemniscate {
    fn sample(&self, w: f64) -> CurveSample {
        let a = self.scale;
        let (s, c) = w.sin_cos();
        let (s2, c2) = (2.0 * w).sin_cos();
        let den = Jet { v: 1.0 + s * s, d1: s2, d2: 2.0 * c2 };
        let nx = Jet { v: a * c, d1: -a * s, d2: -a * c };
        let ny = Jet { v: 0.5 * a * s2, d1: a * c2, d2: -2.0 * a * s2 };
        sample_from(nx.div(den), ny.div(den))
    }
}

/// Planar projection of a trefoil knot:
/// `(cos(a w), sin(a w)) * (A cos(b w) + B) + center`.
#[derive(Debug, Clone)]
pub struct TrefoilProjection {
    pub amplitude: f64,
    pub offset: f64,
    pub outer_freq: f64,
    pub inner_freq: f64,
    pub center: Vector2<f64>,
}

impl Curve for TrefoilProjection {
    fn sample(&self, w: f64) -> CurveSample {
        let r = Jet::cos(self.inner_freq, 0.0, w);
        let r = Jet {
            v: self.amplitude * r.v + self.offset,
            d1: self.amplitude * r.d1,
            d2: self.amplitude * r.d2,
        };
        let x = Jet::cos(self.outer_freq, 0.0, w).mul(r);
        let y = Jet::sin(self.outer_freq, 0.0, w).mul(r);
        let mut out = sample_from(x, y);
        out.pos += self.center;
        out
    }
}

/// Planar projection of a Lissajous knot:
/// `amplitude .* cos(freq * w + phase) + center`, componentwise.
#[derive(Debug, Clone)]
pub struct Lissajous {
    pub amplitude: Vector2<f64>,
    pub freq: Vector2<f64>,
    pub phase: Vector2<f64>,
    pub center: Vector2<f64>,
}

impl Curve for Lissajous {
    fn sample(&self, w: f64) -> CurveSample {
        let x = Jet::cos(self.freq.x, self.phase.x, w);
        let y = Jet::cos(self.freq.y, self.phase.y, w);
        let (ax, ay) = (self.amplitude.x, self.amplitude.y);
        CurveSample {
            pos: Vector2::new(ax * x.v, ay * y.v) + self.center,
            d1: Vector2::new(ax * x.d1, ay * y.d1),
            d2: Vector2::new(ax * x.d2, ay * y.d2),
        }
    }
}

/// Figure-eight `phi = x^2 - 4 y^2 (1 - y^2)`, crossing at the origin.
#[derive(Debug, Clone)]
pub struct Figure8Implicit;

impl ImplicitCurve for Figure8Implicit {
    fn phi(&self, q: &Vector2<f64>) -> f64 {
        let (x, y) = (q.x, q.y);
        x * x - 4.0 * y * y * (1.0 - y * y)
    }

    fn grad(&self, q: &Vector2<f64>) -> Vector2<f64> {
        let (x, y) = (q.x, q.y);
        Vector2::new(2.0 * x, -8.0 * y + 16.0 * y * y * y)
    }
}

/// `phi = x^2 + y^2 - r^2`.
#[derive(Debug, Clone)]
pub struct CircleImplicit {
    pub radius: f64,
}

impl ImplicitCurve for CircleImplicit {
    fn phi(&self, q: &Vector2<f64>) -> f64 {
        q.norm_squared() - self.radius * self.radius
    }

    fn grad(&self, q: &Vector2<f64>) -> Vector2<f64> {
        2.0 * q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_diff(f: impl Fn(f64) -> f64, w: f64, h: f64) -> f64 {
        (f(w + h) - f(w - h)) / (2.0 * h)
    }

    #[test]
    fn unknown_name_lists_valid_names() {
        let err = builtin_path("spiral", &[]).unwrap_err();
        let msg = err.to_string();
        for name in PARAMETRIC_NAMES {
            assert!(msg.contains(name), "{msg}");
        }
        assert!(builtin_implicit("spiral", &[]).is_err());
    }

    #[test]
    fn too_many_params_rejected() {
        assert!(matches!(
            builtin_parametric("lemniscate", &[1.0, 2.0]),
            Err(GvfError::BadPathParams { max: 1, got: 2, .. })
        ));
    }

    #[test]
    fn figure8_origin_on_zero_set() {
        let p = builtin_path("figure8_implicit", &[]).unwrap().into_implicit().unwrap();
        assert_eq!(p.phi(&Vector2::zeros()), 0.0);
    }

    #[test]
    fn trefoil_at_zero() {
        let p = builtin_parametric("trefoil_projection", &[]).unwrap();
        assert_eq!(p.point(0.0), Vector2::new(840.0, 350.0));
    }

    #[test]
    fn lemniscate_at_zero() {
        let p = builtin_parametric("lemniscate", &[]).unwrap();
        assert_eq!(p.point(0.0), Vector2::new(1.0, 0.0));
    }

    #[test]
    fn param_hints_close_the_curves() {
        for name in ["circle", "lemniscate", "trefoil_projection", "lissajous"] {
            let p = builtin_parametric(name, &[]).unwrap();
            let (lo, hi) = p.param_hint();
            assert!((p.point(lo) - p.point(hi)).norm() < 1e-9, "{name}");
            // and no shorter half period closes it
            let mid = p.point(0.5 * (lo + hi));
            assert!((p.point(lo) - mid).norm() > 1e-3, "{name}");
        }
        let trefoil = builtin_parametric("trefoil_projection", &[]).unwrap();
        assert!((trefoil.param_hint().1 - 200.0 * PI).abs() < 1e-9);
        let liss = builtin_parametric("lissajous", &[]).unwrap();
        assert!((liss.param_hint().1 - 100.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_central_differences() {
        for name in PARAMETRIC_NAMES {
            let p = builtin_parametric(name, &[]).unwrap();
            let (lo, hi) = p.param_hint();
            for i in 0..200 {
                let w = lo + (hi - lo) * (i as f64 + 0.37) / 200.0;
                let h = 1e-5 * (1.0 + w.abs());
                let s = p.sample(w);
                let checks = [
                    (s.d1.x, central_diff(|w| p.f1(w), w, h)),
                    (s.d1.y, central_diff(|w| p.f2(w), w, h)),
                    (s.d2.x, central_diff(|w| p.df1(w), w, h)),
                    (s.d2.y, central_diff(|w| p.df2(w), w, h)),
                ];
                for (analytic, fd) in checks {
                    let rel = (analytic - fd).abs() / analytic.abs().max(1.0);
                    assert!(rel < 1e-6, "{name} w={w}: {analytic} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn implicit_gradients_match_central_differences() {
        for name in IMPLICIT_NAMES {
            let p = builtin_implicit(name, &[]).unwrap();
            for i in 0..50 {
                let q = Vector2::new(-1.7 + 0.071 * i as f64, 1.3 - 0.053 * i as f64);
                let h = 1e-6;
                let g = p.grad_phi(&q);
                let fx = (p.phi(&(q + Vector2::x() * h)) - p.phi(&(q - Vector2::x() * h))) / (2.0 * h);
                let fy = (p.phi(&(q + Vector2::y() * h)) - p.phi(&(q - Vector2::y() * h))) / (2.0 * h);
                assert!((g.x - fx).abs() / g.x.abs().max(1.0) < 1e-6);
                assert!((g.y - fy).abs() / g.y.abs().max(1.0) < 1e-6);
            }
        }
    }
}

//! Integral curves of the fields themselves, without a robot: `p' = chi(p)`,
//! its projected twin, and the disturbed flow `p' = chi(p) + d(t)`.

use nalgebra::{SVector, Vector2, Vector3};

use super::integrator::rk4_step;
use super::noise::{DisturbanceModel, DisturbanceSource};
use super::trace::{Trace, TraceMeta, TraceRecord};
use crate::error::{GvfError, Result};
use crate::field::{PlanarField, ProjectionOperator, SpatialField};
use crate::geometry::{distance_to_lifted, golden_min, PathSampler};

/// States whose norm exceeds this are reported as a finite escape.
pub const ESCAPE_BOUND: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub dt: f64,
    pub horizon: f64,
    /// Interval between records; rounded to a whole number of steps.
    pub sample_period: f64,
    /// Fill the `dist` column using this many samples, or leave it `NaN`.
    pub dist_resolution: Option<usize>,
}

impl IntegrationOptions {
    pub fn new(dt: f64, horizon: f64) -> Self {
        Self { dt, horizon, sample_period: dt, dist_resolution: None }
    }

    pub fn with_sample_period(mut self, period: f64) -> Self {
        self.sample_period = period;
        self
    }

    pub fn with_distance(mut self, resolution: usize) -> Self {
        self.dist_resolution = Some(resolution);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [("dt", self.dt), ("horizon", self.horizon), ("sample_period", self.sample_period)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(GvfError::InvalidParameter {
                    key: key.into(),
                    reason: format!("must be positive, got {v}"),
                });
            }
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    fn per_sample(&self) -> usize {
        ((self.sample_period / self.dt).round() as usize).max(1)
    }
}

/// Fixed-step RK4 loop shared by every open-loop run. `record` is called at
/// each sample with the time and state; `f` may depend on the step start
/// time through `held`, which is recomputed once per step.
fn integrate<const N: usize, H, F, R>(
    y0: SVector<f64, N>,
    opts: &IntegrationOptions,
    mut held: H,
    f: F,
    mut record: R,
) -> Option<f64>
where
    H: FnMut(f64) -> Vector3<f64>,
    F: Fn(&SVector<f64, N>, &Vector3<f64>) -> SVector<f64, N>,
    R: FnMut(f64, &SVector<f64, N>),
{
    let (n, every) = (opts.steps(), opts.per_sample());
    let mut y = y0;
    for k in 0..=n {
        let t = k as f64 * opts.dt;
        if k % every == 0 || k == n {
            record(t, &y);
        }
        if k == n {
            break;
        }
        let d = held(t);
        y = rk4_step(|_, s| f(s, &d), t, &y, opts.dt);
        if !y.iter().all(|v| v.is_finite()) || y.norm() > ESCAPE_BOUND {
            return Some(t + opts.dt);
        }
    }
    None
}

fn spatial_record(field: &SpatialField, t: f64, p: &Vector3<f64>, resolution: Option<usize>) -> TraceRecord {
    let e = field.surfaces().error(p);
    let mut r = TraceRecord::empty(t);
    r.x = p.x;
    r.y = p.y;
    r.w = p.z;
    r.phi1 = e.x;
    r.phi2 = e.y;
    r.err_norm = e.norm();
    if let Some(res) = resolution {
        r.dist = distance_to_lifted(p, field.path(), res).0;
    }
    r
}

fn mark_escape(trace: &mut Trace, escaped: Option<f64>) {
    if let Some(t) = escaped {
        trace.meta.abort = Some(format!("finite escape before t = {t}"));
    }
}

/// Integral curve of the 3D field from `p0`.
pub fn run_integral_curve(field: &SpatialField, p0: &Vector3<f64>, opts: &IntegrationOptions) -> Result<Trace> {
    opts.validate()?;
    let mut trace = Trace::new(TraceMeta::new("integral_curve/spatial"));
    let escaped = integrate(
        *p0,
        opts,
        |_| Vector3::zeros(),
        |p, _| field.chi(p),
        |t, p| trace.records.push(spatial_record(field, t, p, opts.dist_resolution)),
    );
    mark_escape(&mut trace, escaped);
    Ok(trace)
}

/// Integral curve of a planar field. `phi1` holds the surface function,
/// `err_norm` its absolute value; the `w` column stays `NaN`.
pub fn run_planar_integral_curve(field: &PlanarField, q0: &Vector2<f64>, opts: &IntegrationOptions) -> Result<Trace> {
    opts.validate()?;
    let mut trace = Trace::new(TraceMeta::new("integral_curve/planar"));
    let escaped = integrate(
        *q0,
        opts,
        |_| Vector3::zeros(),
        |q, _| field.eval(q),
        |t, q| {
            let phi = field.path().phi(q);
            let mut r = TraceRecord::empty(t);
            r.x = q.x;
            r.y = q.y;
            r.phi1 = phi;
            r.err_norm = phi.abs();
            trace.records.push(r);
        },
    );
    mark_escape(&mut trace, escaped);
    Ok(trace)
}

/// Distance from a projected point to the projected lifted path, searched
/// around the parameter `w_star` of the nearest lifted point. Including
/// `w_star` itself bounds the result by the lifted distance, since the
/// projection is non-expansive. When the axis is `w` the full planar path is
/// also searched.
fn projected_distance(
    field: &SpatialField,
    op: &ProjectionOperator,
    q: &Vector3<f64>,
    w_star: f64,
    window: f64,
    planar: Option<&PathSampler>,
) -> f64 {
    let path = field.path();
    let image = |w: f64| {
        let c = path.point(w);
        op.project(&Vector3::new(c.x, c.y, w))
    };
    let at_star = (q - image(w_star)).norm();
    let local = golden_min(|w| (q - image(w)).norm(), w_star - window, w_star + window, 60).0;
    let global = planar.map_or(f64::INFINITY, |s| s.distance(&q.xy()));
    at_star.min(local).min(global)
}

/// Output of [`run_projected`]: the 3D trace and the trace of its projection.
#[derive(Debug, Clone)]
pub struct ProjectedRun {
    pub lifted: Trace,
    pub projected: Trace,
}

/// Integrates the extended system `p' = chi(p)`, `q' = P chi(p)` with
/// `q(0) = P p0`. Both traces carry distances when `opts.dist_resolution`
/// is set: to the lifted path for `p` and to its projection for `q`.
pub fn run_projected(
    field: &SpatialField,
    op: &ProjectionOperator,
    p0: &Vector3<f64>,
    opts: &IntegrationOptions,
) -> Result<ProjectedRun> {
    opts.validate()?;
    let drops_w = op.axis().x == 0.0 && op.axis().y == 0.0;
    let planar = match (drops_w, opts.dist_resolution) {
        (true, Some(res)) => Some(PathSampler::new(field.path(), res)),
        _ => None,
    };
    let q0 = op.project(p0);
    let y0 = SVector::<f64, 6>::new(p0.x, p0.y, p0.z, q0.x, q0.y, q0.z);
    let mut lifted = Trace::new(TraceMeta::new("projected/lifted"));
    let mut projected = Trace::new(TraceMeta::new("projected/projection"));
    let escaped = integrate(
        y0,
        opts,
        |_| Vector3::zeros(),
        |y, _| {
            let chi = field.chi(&Vector3::new(y[0], y[1], y[2]));
            let pc = op.matrix() * chi;
            SVector::<f64, 6>::new(chi.x, chi.y, chi.z, pc.x, pc.y, pc.z)
        },
        |t, y| {
            let p = Vector3::new(y[0], y[1], y[2]);
            let q = Vector3::new(y[3], y[4], y[5]);
            let mut a = spatial_record(field, t, &p, None);
            let mut b = TraceRecord::empty(t);
            b.x = q.x;
            b.y = q.y;
            b.w = q.z;
            if let Some(res) = opts.dist_resolution {
                let (d, w_star) = distance_to_lifted(&p, field.path(), res);
                a.dist = d;
                b.dist = projected_distance(field, op, &q, w_star, d.max(1e-6), planar.as_ref());
            }
            lifted.records.push(a);
            projected.records.push(b);
        },
    );
    mark_escape(&mut lifted, escaped);
    mark_escape(&mut projected, escaped);
    Ok(ProjectedRun { lifted, projected })
}

/// Output of [`run_perturbed`].
#[derive(Debug, Clone)]
pub struct PerturbedRun {
    pub trace: Trace,
    /// Largest `err_norm` over `[T/2, T]`.
    pub tail_sup_err: f64,
}

/// Integrates `p' = chi(p) + d(t)` with `d` drawn from the seeded
/// disturbance stream and held over each RK4 step.
pub fn run_perturbed(
    field: &SpatialField,
    disturbance: &DisturbanceModel,
    p0: &Vector3<f64>,
    opts: &IntegrationOptions,
    seed: u64,
) -> Result<PerturbedRun> {
    opts.validate()?;
    disturbance.validate()?;
    let mut source = DisturbanceSource::new(*disturbance, seed);
    let mut trace = Trace::new(TraceMeta::new("perturbed/spatial"));
    trace.meta.seed = Some(seed);
    let escaped = integrate(
        *p0,
        opts,
        |t| source.sample(t),
        |p, d| field.chi(p) + d,
        |t, p| trace.records.push(spatial_record(field, t, p, opts.dist_resolution)),
    );
    mark_escape(&mut trace, escaped);
    let half = 0.5 * opts.horizon;
    let tail_sup_err = if escaped.is_some() {
        f64::INFINITY
    } else {
        trace.since(half - 1e-9).map(|r| r.err_norm).fold(0.0, f64::max)
    };
    Ok(PerturbedRun { trace, tail_sup_err })
}

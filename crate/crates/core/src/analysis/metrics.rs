use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::error::{GvfError, Result};
use crate::sim::Trace;
use crate::wrap_angle;

/// Fraction of a run treated as its tail by every metric here.
pub const TAIL_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitClass {
    ConvergedToPath,
    ConvergedToSingular,
    Undecided,
}

/// Where a trajectory ended up. The path test uses the `err_norm` column
/// (`|phi|` for planar runs, `||(phi1, phi2)||` for lifted ones); the
/// singular test requires every tail position to stay within `eps` of one
/// listed point.
pub fn classify_limit(trace: &Trace, singular_points: &[Vector2<f64>], eps: f64) -> LimitClass {
    let tail: Vec<_> = trace.tail(TAIL_FRACTION).collect();
    if tail.is_empty() {
        return LimitClass::Undecided;
    }
    if tail.iter().all(|r| r.err_norm < eps) {
        return LimitClass::ConvergedToPath;
    }
    let near = |s: &Vector2<f64>| tail.iter().all(|r| (Vector2::new(r.x, r.y) - s).norm() < eps);
    if singular_points.iter().any(near) {
        LimitClass::ConvergedToSingular
    } else {
        LimitClass::Undecided
    }
}

/// `V = 1 - cos(beta)` along a closed-loop run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSeries {
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    /// Largest `V[i+1] - V[i]`, or 0 if `V` never increases.
    pub max_increment: f64,
    /// Largest `|beta[i+1]| - |beta[i]|`, or 0.
    pub max_abs_beta_increment: f64,
    /// The start had `|beta| = pi`, outside the open set the decrease
    /// argument covers.
    pub excluded: bool,
}

pub fn lyapunov_series(trace: &Trace) -> Result<LyapunovSeries> {
    if trace.records.iter().any(|r| r.beta.is_nan()) {
        return Err(GvfError::Contract("lyapunov_series needs a beta column (GVF runs only)".into()));
    }
    let t = trace.records.iter().map(|r| r.t).collect();
    let v: Vec<f64> = trace.records.iter().map(|r| 1.0 - r.beta.cos()).collect();
    let max_increment = v.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let max_abs_beta_increment = trace
        .records
        .windows(2)
        .map(|w| w[1].beta.abs() - w[0].beta.abs())
        .fold(0.0, f64::max);
    let excluded = trace.meta.excluded_initial_condition
        || trace.records.first().is_some_and(|r| r.beta.abs() >= std::f64::consts::PI - 1e-12);
    Ok(LyapunovSeries { t, v, max_increment, max_abs_beta_increment, excluded })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessMetrics {
    /// Sum of absolute heading increments, each taken on the nearest branch.
    pub heading_total_variation: f64,
    /// Number of records with a negative speed command.
    pub reversal_count: usize,
    /// RMS over the tail of the distance to the path, falling back to
    /// `err_norm` when distances were not recorded.
    pub err_rms: f64,
}

pub fn smoothness_metrics(trace: &Trace) -> SmoothnessMetrics {
    let heading_total_variation = trace
        .records
        .windows(2)
        .map(|w| wrap_angle(w[1].theta - w[0].theta).abs())
        .sum();
    let reversal_count = trace.records.iter().filter(|r| r.v_u < 0.0).count();
    let use_dist = trace.records.iter().all(|r| r.dist.is_finite());
    let tail: Vec<f64> = trace
        .tail(TAIL_FRACTION)
        .map(|r| if use_dist { r.dist } else { r.err_norm })
        .collect();
    let err_rms = if tail.is_empty() {
        f64::NAN
    } else {
        (tail.iter().map(|e| e * e).sum::<f64>() / tail.len() as f64).sqrt()
    };
    SmoothnessMetrics { heading_total_variation, reversal_count, err_rms }
}

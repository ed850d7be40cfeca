//! Seeded measurement noise and plant disturbances.
//!
//! Every random consumer draws from its own ChaCha8 stream of the run seed:
//! stream [`NOISE_STREAM`] for measurement noise and [`DISTURBANCE_STREAM`]
//! for disturbances, so enabling one never shifts the other's samples.

use nalgebra::{Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GvfError, Result};

pub const NOISE_STREAM: u64 = 1;
pub const DISTURBANCE_STREAM: u64 = 2;

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Band-limited white noise on the perceived position, realised as a
/// zero-order-held Gaussian with per-axis variance `power / sample_time`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub power: f64,
    pub sample_time: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.power >= 0.0 && self.power.is_finite()) {
            return Err(invalid("noise.power", "must be finite and >= 0"));
        }
        if !(self.sample_time > 0.0 && self.sample_time.is_finite()) {
            return Err(invalid("noise.sample_time", "must be positive"));
        }
        Ok(())
    }

    pub fn std_dev(&self) -> f64 {
        (self.power / self.sample_time).sqrt()
    }
}

/// Hold index of time `t` for a hold interval; robust to `t = k * hold`
/// being computed with rounding error.
fn hold_index(t: f64, hold: f64) -> u64 {
    ((t / hold) + 1e-9).floor().max(0.0) as u64
}

/// Stateful sampler for a [`NoiseModel`]. Draws one value per hold interval
/// in order, so the realisation does not depend on how often it is queried.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    model: NoiseModel,
    rng: ChaCha8Rng,
    index: Option<u64>,
    value: Vector2<f64>,
}

impl NoiseSource {
    pub fn new(model: NoiseModel, seed: u64) -> Self {
        Self {
            model,
            rng: stream_rng(seed, NOISE_STREAM),
            index: None,
            value: Vector2::zeros(),
        }
    }

    /// Noise value at time `t`; times must be queried in non-decreasing order.
    pub fn sample(&mut self, t: f64) -> Vector2<f64> {
        let target = hold_index(t, self.model.sample_time);
        let std = self.model.std_dev();
        while self.index.is_none_or(|i| i < target) {
            let a: f64 = self.rng.sample(StandardNormal);
            let b: f64 = self.rng.sample(StandardNormal);
            self.value = Vector2::new(a, b) * std;
            self.index = Some(self.index.map_or(0, |i| i + 1));
        }
        self.value
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DisturbanceKind {
    /// Random direction, magnitude exactly `r`, redrawn every `hold`.
    ConstantBound,
    /// Random direction redrawn every `hold`, magnitude `r exp(-t / tau)`.
    Decaying,
}

/// Additive perturbation `d(t)` of the plant dynamics, `||d(t)|| <= r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisturbanceModel {
    pub kind: DisturbanceKind,
    pub r: f64,
    /// Decay time constant; only read for [`DisturbanceKind::Decaying`].
    pub tau: f64,
    pub hold: f64,
}

impl DisturbanceModel {
    pub fn constant_bound(r: f64, hold: f64) -> Self {
        Self { kind: DisturbanceKind::ConstantBound, r, tau: f64::INFINITY, hold }
    }

    pub fn decaying(r: f64, tau: f64, hold: f64) -> Self {
        Self { kind: DisturbanceKind::Decaying, r, tau, hold }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return Err(invalid("disturbance.r", "must be finite and >= 0"));
        }
        if !(self.hold > 0.0 && self.hold.is_finite()) {
            return Err(invalid("disturbance.hold", "must be positive"));
        }
        if self.kind == DisturbanceKind::Decaying && (self.tau.is_nan() || self.tau <= 0.0) {
            return Err(invalid("disturbance.tau", "must be positive"));
        }
        Ok(())
    }

    pub fn magnitude(&self, t: f64) -> f64 {
        match self.kind {
            DisturbanceKind::ConstantBound => self.r,
            DisturbanceKind::Decaying => self.r * (-t / self.tau).exp(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DisturbanceSource {
    model: DisturbanceModel,
    rng: ChaCha8Rng,
    index: Option<u64>,
    direction: Vector3<f64>,
}

impl DisturbanceSource {
    pub fn new(model: DisturbanceModel, seed: u64) -> Self {
        Self {
            model,
            rng: stream_rng(seed, DISTURBANCE_STREAM),
            index: None,
            direction: Vector3::zeros(),
        }
    }

    pub fn sample(&mut self, t: f64) -> Vector3<f64> {
        let target = hold_index(t, self.model.hold);
        while self.index.is_none_or(|i| i < target) {
            self.direction = loop {
                let v = Vector3::new(
                    self.rng.sample::<f64, _>(StandardNormal),
                    self.rng.sample::<f64, _>(StandardNormal),
                    self.rng.sample::<f64, _>(StandardNormal),
                );
                let n = v.norm();
                if n > 1e-12 {
                    break v / n;
                }
            };
            self.index = Some(self.index.map_or(0, |i| i + 1));
        }
        self.direction * self.model.magnitude(t)
    }
}

fn invalid(key: &str, reason: &str) -> GvfError {
    GvfError::InvalidParameter {
        key: key.into(),
        reason: reason.into(),
    }
}

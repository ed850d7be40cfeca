use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::noise::{DisturbanceModel, NoiseModel};
use crate::control::VelocitySource;
use crate::error::{GvfError, Result};
use crate::field::JacobianMode;
use crate::geometry::{builtin_parametric, ParametricPath};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl PathSpec {
    pub fn new(name: impl Into<String>, params: Vec<f64>) -> Self {
        Self { name: name.into(), params }
    }

    /// Closed-loop runs need a parametric path.
    pub fn build(&self) -> Result<ParametricPath> {
        builtin_parametric(&self.name, &self.params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GvfSpec {
    pub s: f64,
    pub k1: f64,
    pub k2: f64,
    pub k_theta: f64,
    #[serde(default)]
    pub velocity_source: VelocitySource,
    #[serde(default)]
    pub jacobian_mode: JacobianMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajTrackSpec {
    pub k1t: f64,
    pub k2t: f64,
    pub k3t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ControllerSpec {
    Gvf(GvfSpec),
    TrajTrack(TrajTrackSpec),
}

impl ControllerSpec {
    pub fn label(&self) -> &'static str {
        match self {
            ControllerSpec::Gvf(_) => "gvf",
            ControllerSpec::TrajTrack(_) => "traj_track",
        }
    }
}

/// Initial pose and virtual coordinate. `w` is ignored by trajectory
/// tracking, whose clock starts at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    #[serde(default)]
    pub w: f64,
}

pub const DEFAULT_DT: f64 = 0.005;
pub const DEFAULT_CONTROL_PERIOD: f64 = 0.05;
pub const DEFAULT_DIST_RESOLUTION: usize = 4000;

/// Declarative input of one closed-loop run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub path: PathSpec,
    pub controller: ControllerSpec,
    pub init: InitialState,
    /// RK4 step of the plant.
    pub dt: f64,
    /// Interval between controller evaluations; an integer multiple of `dt`.
    pub control_period: f64,
    pub horizon: f64,
    /// Interval between trace records; an integer multiple of `dt`.
    pub sample_period: f64,
    pub noise: Option<NoiseModel>,
    pub disturbance: Option<DisturbanceModel>,
    pub seed: u64,
    /// Samples used for the `dist` column.
    pub dist_resolution: usize,
}

impl Scenario {
    /// A scenario with the default step, 20 Hz control and no noise.
    pub fn new(path: PathSpec, controller: ControllerSpec, init: InitialState, horizon: f64) -> Self {
        Self {
            path,
            controller,
            init,
            dt: DEFAULT_DT,
            control_period: DEFAULT_CONTROL_PERIOD,
            horizon,
            sample_period: DEFAULT_CONTROL_PERIOD,
            noise: None,
            disturbance: None,
            seed: 0,
            dist_resolution: DEFAULT_DIST_RESOLUTION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("dt", self.dt)?;
        positive("horizon", self.horizon)?;
        positive("control_period", self.control_period)?;
        positive("sample_period", self.sample_period)?;
        steps_of("control_period", self.control_period, self.dt)?;
        steps_of("sample_period", self.sample_period, self.dt)?;
        if self.dist_resolution < 2 {
            return Err(invalid("dist_resolution", "must be at least 2"));
        }
        for (key, v) in [("x", self.init.x), ("y", self.init.y), ("theta", self.init.theta), ("w", self.init.w)] {
            if !v.is_finite() {
                return Err(invalid(key, "must be finite"));
            }
        }
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        if let Some(d) = &self.disturbance {
            d.validate()?;
        }
        match &self.controller {
            ControllerSpec::Gvf(g) => {
                for (key, v) in [("s", g.s), ("k1", g.k1), ("k2", g.k2), ("k_theta", g.k_theta)] {
                    positive(key, v)?;
                }
            }
            ControllerSpec::TrajTrack(g) => {
                for (key, v) in [("k1t", g.k1t), ("k2t", g.k2t), ("k3t", g.k3t)] {
                    positive(key, v)?;
                }
            }
        }
        self.path.build().map(|_| ())
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn steps_per_control(&self) -> usize {
        (self.control_period / self.dt).round() as usize
    }

    pub fn steps_per_sample(&self) -> usize {
        (self.sample_period / self.dt).round() as usize
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scenario is always serializable")
    }

    /// Hex SHA-256 of [`Scenario::to_json`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.to_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(key, &format!("must be positive and finite, got {v}")))
    }
}

fn steps_of(key: &str, period: f64, dt: f64) -> Result<usize> {
    let ratio = period / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
        return Err(invalid(key, &format!("must be an integer multiple of dt = {dt}, got {period}")));
    }
    Ok(n as usize)
}

fn invalid(key: &str, reason: &str) -> GvfError {
    GvfError::InvalidParameter {
        key: key.into(),
        reason: reason.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> Scenario {
        Scenario::new(
            PathSpec::new("circle", vec![]),
            ControllerSpec::Gvf(GvfSpec {
                s: 1.0,
                k1: 1.0,
                k2: 1.0,
                k_theta: 1.0,
                velocity_source: VelocitySource::Measured,
                jacobian_mode: JacobianMode::Analytic,
            }),
            InitialState { x: 1.0, y: 0.0, theta: 0.0, w: 0.0 },
            10.0,
        )
    }

    #[test]
    fn defaults_validate() {
        let s = base();
        s.validate().unwrap();
        assert_eq!(s.steps(), 2000);
        assert_eq!(s.steps_per_control(), 10);
    }

    #[test]
    fn rejects_bad_timing() {
        let mut s = base();
        s.dt = 0.0;
        assert!(matches!(s.validate(), Err(GvfError::InvalidParameter { key, .. }) if key == "dt"));
        let mut s = base();
        s.control_period = 0.0123;
        assert!(matches!(s.validate(), Err(GvfError::InvalidParameter { key, .. }) if key == "control_period"));
        let mut s = base();
        s.control_period = 0.001;
        assert!(s.validate().is_err());
    }

    #[test]
    fn rejects_unknown_path_and_bad_gain() {
        let mut s = base();
        s.path.name = "spiral".into();
        assert!(matches!(s.validate(), Err(GvfError::UnknownPath { .. })));
        let mut s = base();
        s.controller = ControllerSpec::TrajTrack(TrajTrackSpec { k1t: 1.0, k2t: -1.0, k3t: 1.0 });
        assert!(s.validate().is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = base();
        let mut b = base();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        let back: Scenario = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}

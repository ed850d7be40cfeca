use std::f64::consts::PI;

use nalgebra::{Vector2, Vector3};

use super::integrator::rk4_step;
use super::noise::{DisturbanceSource, NoiseSource};
use super::scenario::{ControllerSpec, Scenario};
use super::trace::{Trace, TraceMeta, TraceRecord};
use crate::control::{ControlOutput, GvfController, TrajTrackController, UnicycleState};
use crate::error::{GvfError, Result};
use crate::field::SpatialField;
use crate::geometry::{lift_to_surfaces, PathSampler};

/// Result of a closed-loop run. A controller failure mid-run is not an
/// `Err`: the trace up to that point is kept and `abort` holds the cause.
#[derive(Debug, Clone)]
pub struct SimOutcome {
    pub trace: Trace,
    pub abort: Option<GvfError>,
}

impl SimOutcome {
    pub fn is_complete(&self) -> bool {
        self.abort.is_none()
    }
}

enum Controller {
    Gvf(GvfController),
    Track(TrajTrackController),
}

/// Simulates the unicycle under the scenario's controller.
///
/// The plant is integrated with RK4 at `dt`. Every `control_period` the
/// controller sees the (possibly noisy) pose, its outputs are held until the
/// next evaluation, and the GVF virtual coordinate takes one Euler step of
/// length `control_period`. The same scenario always yields the same trace.
pub fn run_closed_loop(scenario: &Scenario) -> Result<SimOutcome> {
    scenario.validate()?;
    let path = scenario.path.build()?;
    let surfaces = lift_to_surfaces(&path);
    let sampler = PathSampler::new(&path, scenario.dist_resolution);

    let mut controller = match scenario.controller {
        ControllerSpec::Gvf(g) => {
            let field = SpatialField::from_path(&path, g.k1, g.k2)?;
            Controller::Gvf(
                GvfController::new(field, g.s, g.k_theta, scenario.init.w)?
                    .with_velocity_source(g.velocity_source)
                    .with_jacobian_mode(g.jacobian_mode),
            )
        }
        ControllerSpec::TrajTrack(g) => Controller::Track(TrajTrackController::new(path.clone(), g.k1t, g.k2t, g.k3t)?),
    };

    let mut meta = TraceMeta::new(format!("closed_loop/{}", scenario.controller.label()));
    meta.seed = Some(scenario.seed);
    meta.scenario_hash = Some(scenario.hash());
    meta.scenario = serde_json::to_value(scenario).ok();
    let mut trace = Trace::new(meta);

    let mut noise = scenario.noise.map(|m| NoiseSource::new(m, scenario.seed));
    let mut disturbance = scenario.disturbance.map(|m| DisturbanceSource::new(m, scenario.seed));

    let (dt, period) = (scenario.dt, scenario.control_period);
    let (n, per_control, per_sample) = (scenario.steps(), scenario.steps_per_control(), scenario.steps_per_sample());
    let mut y = Vector3::new(scenario.init.x, scenario.init.y, scenario.init.theta);
    let mut held = ControlOutput { v_u: 0.0, omega_u: 0.0, w_dot: None, beta: None };
    let mut odometry_speed = 0.0;

    for k in 0..=n {
        let t = k as f64 * dt;
        let pose = UnicycleState::new(y.x, y.y, y.z);
        let d = disturbance.as_mut().map_or(Vector3::zeros(), |s| s.sample(t));

        if k % per_control == 0 {
            let offset = noise.as_mut().map_or(Vector2::zeros(), |s| s.sample(t));
            let perceived = UnicycleState { x: pose.x + offset.x, y: pose.y + offset.y, theta: pose.theta };
            let out = match &controller {
                Controller::Gvf(c) => c.command(&perceived, &(pose.heading() * odometry_speed)),
                Controller::Track(c) => c.command(&perceived, t),
            };
            match out {
                Ok(o) => held = o,
                Err(e) => {
                    trace.meta.abort = Some(format!("t = {t}: {e}"));
                    return Ok(SimOutcome { trace, abort: Some(e) });
                }
            }
            if k == 0 {
                trace.meta.excluded_initial_condition = held.beta.is_some_and(|b| b.abs() >= PI - 1e-12);
            }
            odometry_speed = held.v_u;
        }

        if k % per_sample == 0 {
            let w = match &controller {
                Controller::Gvf(c) => c.w(),
                Controller::Track(_) => t,
            };
            let e = surfaces.error(&Vector3::new(pose.x, pose.y, w));
            trace.records.push(TraceRecord {
                t,
                x: pose.x,
                y: pose.y,
                theta: pose.theta,
                w,
                v_u: held.v_u,
                omega_u: held.omega_u,
                phi1: e.x,
                phi2: e.y,
                err_norm: e.norm(),
                beta: held.beta.unwrap_or(f64::NAN),
                dist: sampler.distance(&Vector2::new(pose.x, pose.y)),
            });
        }
        if k == n {
            break;
        }

        if k % per_control == 0 {
            if let (Controller::Gvf(c), Some(w_dot)) = (&mut controller, held.w_dot) {
                c.advance(w_dot + d.z, period);
            }
        }
        let (v, omega) = (held.v_u, held.omega_u);
        y = rk4_step(
            |_, s: &Vector3<f64>| Vector3::new(v * s.z.cos() + d.x, v * s.z.sin() + d.y, omega),
            t,
            &y,
            dt,
        );
    }
    Ok(SimOutcome { trace, abort: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::VelocitySource;
    use crate::field::JacobianMode;
    use crate::sim::noise::NoiseModel;
    use crate::sim::scenario::{GvfSpec, InitialState, PathSpec, TrajTrackSpec};

    fn circle_gvf(init: InitialState, horizon: f64) -> Scenario {
        let mut s = Scenario::new(
            PathSpec::new("circle", vec![]),
            ControllerSpec::Gvf(GvfSpec {
                s: 1.0,
                k1: 1.0,
                k2: 1.0,
                k_theta: 2.0,
                velocity_source: VelocitySource::Measured,
                jacobian_mode: JacobianMode::Analytic,
            }),
            init,
            horizon,
        );
        s.control_period = s.dt;
        s.sample_period = 0.1;
        s
    }

    #[test]
    fn on_path_aligned_start_stays_on_path() {
        // At (1, 0, 0) the field is (0, 1, 1): heading pi/2 is aligned.
        let s = circle_gvf(InitialState { x: 1.0, y: 0.0, theta: PI / 2.0, w: 0.0 }, 20.0);
        let out = run_closed_loop(&s).unwrap();
        assert!(out.is_complete());
        assert!(out.trace.records[0].beta.abs() < 1e-12);
        for r in &out.trace.records {
            assert!(r.err_norm < 1e-3, "t = {} err = {}", r.t, r.err_norm);
        }
        assert!(out.trace.last().unwrap().w > 10.0);
    }

    #[test]
    fn off_path_start_converges() {
        let s = circle_gvf(InitialState { x: 2.5, y: -1.0, theta: 0.3, w: 0.0 }, 60.0);
        let out = run_closed_loop(&s).unwrap();
        assert!(out.trace.records[0].err_norm > 1.0);
        assert!(out.trace.last().unwrap().err_norm < 1e-3);
        assert!(out.trace.last().unwrap().dist < 1e-3);
    }

    #[test]
    fn deterministic_with_noise() {
        let mut s = circle_gvf(InitialState { x: 2.0, y: 0.0, theta: 0.0, w: 0.0 }, 5.0);
        s.noise = Some(NoiseModel { power: 0.001, sample_time: 0.1 });
        s.seed = 11;
        let a = run_closed_loop(&s).unwrap().trace;
        let b = run_closed_loop(&s).unwrap().trace;
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.meta, b.meta);
        s.seed = 12;
        assert_ne!(run_closed_loop(&s).unwrap().trace.to_csv(), a.to_csv());
    }

    #[test]
    fn anti_aligned_start_is_flagged() {
        let s = circle_gvf(InitialState { x: 1.0, y: 0.0, theta: -PI / 2.0, w: 0.0 }, 1.0);
        let out = run_closed_loop(&s).unwrap();
        assert!(out.trace.meta.excluded_initial_condition);
        let s = circle_gvf(InitialState { x: 1.0, y: 0.0, theta: 0.0, w: 0.0 }, 1.0);
        assert!(!run_closed_loop(&s).unwrap().trace.meta.excluded_initial_condition);
    }

    #[test]
    fn singular_heading_aborts_with_partial_trace() {
        // On a line along x the field at (1, 0, 0) is (1 - 1, 0, 1 + 1): purely vertical.
        let mut s = circle_gvf(InitialState { x: 1.0, y: 0.0, theta: 0.0, w: 0.0 }, 1.0);
        s.path = PathSpec::new("line", vec![]);
        let out = run_closed_loop(&s).unwrap();
        assert!(matches!(out.abort, Some(GvfError::SingularHeading { .. })));
        assert!(out.trace.meta.abort.is_some());
        assert!(out.trace.is_empty());
    }

    #[test]
    fn tracking_follows_circle_clock() {
        let mut s = circle_gvf(InitialState { x: 1.5, y: 0.0, theta: PI / 2.0, w: 0.0 }, 30.0);
        s.controller = ControllerSpec::TrajTrack(TrajTrackSpec { k1t: 1.0, k2t: 1.0, k3t: 1.0 });
        let out = run_closed_loop(&s).unwrap();
        assert!(out.is_complete());
        let last = out.trace.last().unwrap();
        assert_eq!(last.w, last.t);
        assert!(last.err_norm < 1e-3, "{}", last.err_norm);
        assert!(last.beta.is_nan());
    }

    #[test]
    fn invalid_scenario_is_an_error() {
        let mut s = circle_gvf(InitialState { x: 1.0, y: 0.0, theta: 0.0, w: 0.0 }, 1.0);
        s.horizon = -1.0;
        assert!(run_closed_loop(&s).is_err());
    }
}

//! Fixed-step simulation: the closed loop of a unicycle and its controller,
//! open-loop integral curves of the fields, measurement noise and
//! disturbances, and the trace format shared by all of them.

mod closed_loop;
mod integrator;
mod noise;
mod open_loop;
mod scenario;
mod trace;

pub use closed_loop::{run_closed_loop, SimOutcome};
pub use integrator::{rk4_integrate, rk4_step};
pub use noise::{
    stream_rng, DisturbanceKind, DisturbanceModel, DisturbanceSource, NoiseModel, NoiseSource, DISTURBANCE_STREAM,
    NOISE_STREAM,
};
pub use open_loop::{
    run_integral_curve, run_perturbed, run_planar_integral_curve, run_projected, IntegrationOptions, PerturbedRun,
    ProjectedRun, ESCAPE_BOUND,
};
pub use scenario::{
    ControllerSpec, GvfSpec, InitialState, PathSpec, Scenario, TrajTrackSpec, DEFAULT_CONTROL_PERIOD, DEFAULT_DIST_RESOLUTION,
    DEFAULT_DT,
};
pub use trace::{write_atomic, Trace, TraceMeta, TraceRecord, CSV_HEADER, NOISE_SEMANTICS};

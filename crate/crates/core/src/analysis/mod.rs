//! Numerical checks on fields and runs: singular-point search, limit
//! classification, Lyapunov and smoothness metrics, finite-difference
//! oracles, and the claim suites reported by `gvf verify`.

mod fdcheck;
mod metrics;
mod singular;
mod verify;

pub use fdcheck::finite_diff_check;
pub use metrics::{classify_limit, lyapunov_series, smoothness_metrics, LimitClass, LyapunovSeries, SmoothnessMetrics, TAIL_FRACTION};
pub use singular::{find_singular_points_2d, Aabb2, ROOT_RESIDUAL};
pub use verify::{
    figure8_undecided, heading_jacobian_fd_error, iss_table, path_derivative_fd_error, random_gvf_starts, rk4_observed_order,
    run_suite, trefoil_scenario, unit_box_lifts, Bound, Claim, Report, Suite, VERIFY_STREAM,
};

//! Claim suites: each claim is a measured number compared with a tolerance.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Vector2, Vector3};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{classify_limit, find_singular_points_2d, finite_diff_check, lyapunov_series, Aabb2, LimitClass};
use crate::control::{gvf_law, heading_error, traj_track_law, TrajTrackController, UnicycleState};
use crate::error::{GvfError, Result};
use crate::field::{Aabb3, PlanarField, ProjectionOperator, Psi, SpatialField};
use crate::geometry::{builtin_implicit, builtin_parametric, ParametricPath, PARAMETRIC_NAMES};
use crate::sim::{
    run_closed_loop, run_integral_curve, run_perturbed, run_planar_integral_curve, run_projected, stream_rng,
    ControllerSpec, DisturbanceModel, GvfSpec, InitialState, IntegrationOptions, PathSpec, Scenario,
};

/// Stream of the run seed used to draw random test points.
pub const VERIFY_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fields,
    Control,
    Convergence,
    Robustness,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["fields", "control", "convergence", "robustness", "all"];
}

impl FromStr for Suite {
    type Err = GvfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fields" => Ok(Suite::Fields),
            "control" => Ok(Suite::Control),
            "convergence" => Ok(Suite::Convergence),
            "robustness" => Ok(Suite::Robustness),
            "all" => Ok(Suite::All),
            other => Err(GvfError::InvalidParameter {
                key: "suite".into(),
                reason: format!("unknown suite '{other}', expected one of {}", Suite::NAMES.join(", ")),
            }),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Suite::NAMES[i])
    }
}

/// How `measured` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Passes when `measured < tolerance`.
    Below,
    /// Passes when `measured >= tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub detail: String,
}

impl Claim {
    pub fn below(id: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed: measured < tolerance,
            measured,
            tolerance,
            bound: Bound::Below,
            detail: detail.into(),
        }
    }

    pub fn at_least(id: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            passed: measured >= tolerance,
            measured,
            tolerance,
            bound: Bound::AtLeast,
            detail: detail.into(),
        }
    }

    fn failed(id: &str, err: &GvfError) -> Self {
        Self {
            id: id.into(),
            passed: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            bound: Bound::Below,
            detail: format!("error: {err}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub claims: Vec<Claim>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}

/// Runs one suite, or all of them concurrently for [`Suite::All`].
pub fn run_suite(suite: Suite, seed: u64) -> Report {
    let claims = match suite {
        Suite::Fields => fields_claims(seed),
        Suite::Control => control_claims(seed),
        Suite::Convergence => convergence_claims(seed),
        Suite::Robustness => robustness_claims(seed),
        Suite::All => {
            let parts: [fn(u64) -> Vec<Claim>; 4] = [fields_claims, control_claims, convergence_claims, robustness_claims];
            std::thread::scope(|s| {
                let handles: Vec<_> = parts.iter().map(|f| s.spawn(move || f(seed))).collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("verification thread panicked"))
                    .collect()
            })
        }
    };
    Report { suite, seed, claims }
}

fn catch(id: &str, f: impl FnOnce() -> Result<Claim>) -> Claim {
    f().unwrap_or_else(|e| Claim::failed(id, &e))
}

fn point_in(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vector3<f64> {
    Vector3::new(rng.random_range(lo..hi), rng.random_range(lo..hi), rng.random_range(lo..hi))
}

/// Every parametric catalog path, rescaled so its bounding box fits `[-1, 1]^2`.
pub fn unit_box_lifts(k1: f64, k2: f64) -> Result<Vec<SpatialField>> {
    PARAMETRIC_NAMES
        .iter()
        .map(|name| SpatialField::from_path(&builtin_parametric(name, &[])?.rescaled_to_unit_box(), k1, k2))
        .collect()
}

/// Worst central-difference error of `J(chi^p)` at `p`, step `1e-6 (1 + ||p||)`.
pub fn heading_jacobian_fd_error(field: &SpatialField, p: &Vector3<f64>) -> Result<f64> {
    let jac = field.jacobian_chi_p(p)?;
    let analytic = DMatrix::from_fn(2, 3, |i, j| jac[(i, j)]);
    Ok(finite_diff_check(
        |v| {
            let c = field.chi_p(&Vector3::new(v[0], v[1], v[2]));
            DVector::from_vec(vec![c.x, c.y])
        },
        &analytic,
        &DVector::from_vec(vec![p.x, p.y, p.z]),
        1e-6 * (1.0 + p.norm()),
    ))
}

/// Worst central-difference error of `f'` and `f''` over `n` parameters in
/// the path's hint interval, scaled by `max(1, |analytic|)`.
pub fn path_derivative_fd_error(path: &ParametricPath, n: usize) -> f64 {
    let (lo, hi) = path.param_hint();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let w = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        let h = 1e-5 * (1.0 + w.abs());
        let s = path.sample(w);
        let (p, m) = (path.sample(w + h), path.sample(w - h));
        let d1 = (p.pos - m.pos) / (2.0 * h);
        let d2 = (p.d1 - m.d1) / (2.0 * h);
        for k in 0..2 {
            worst = worst.max((s.d1[k] - d1[k]).abs() / s.d1[k].abs().max(1.0));
            worst = worst.max((s.d2[k] - d2[k]).abs() / s.d2[k].abs().max(1.0));
        }
    }
    worst
}

fn fields_claims(seed: u64) -> Vec<Claim> {
    let mut claims = Vec::new();
    let lifts = match unit_box_lifts(1.0, 1.0) {
        Ok(l) => l,
        Err(e) => return vec![Claim::failed("fields.lifts", &e)],
    };
    let mut rng = stream_rng(seed, VERIFY_STREAM);

    let (mut ortho, mut decomp, mut closed, mut min_norm) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for i in 0..10_000 {
        let field = &lifts[i % lifts.len()];
        let p = point_in(&mut rng, -3.0, 3.0);
        let terms = field.eval(&p);
        ortho = ortho.max(terms.tau.dot(&terms.iota).abs() / (1.0 + terms.tau.norm() * terms.iota.norm()));
        decomp = decomp.max((terms.chi - terms.tau - terms.iota).norm());
        closed = closed.max((terms.chi - field.chi(&p)).amax());
        min_norm = min_norm.min(terms.chi.norm());
    }
    claims.push(Claim::below("fields.orthogonality", ortho, 1e-9, "max |tau.iota| / (1 + |tau||iota|) over 1e4 random points"));
    claims.push(Claim::below("fields.decomposition", decomp, 1e-12, "max |chi - tau - iota|"));
    claims.push(Claim::below("fields.closed_form", closed, 1e-12, "max componentwise |cross-product form - closed form|"));
    claims.push(Claim::at_least("fields.nonvanishing_random", min_norm, 1.0 - 1e-9, "min |chi| over 1e4 random points"));

    let grid_min = lifts
        .iter()
        .map(|f| f.min_field_norm(&Aabb3::cube(-3.0, 3.0), 41))
        .fold(f64::INFINITY, f64::min);
    claims.push(Claim::at_least("fields.nonvanishing_grid", grid_min, 1.0 - 1e-9, "min |chi| on a 41^3 grid over [-3, 3]^3, all lifts"));

    let mut jac_err = 0.0f64;
    let mut jac_fail = None;
    for field in &lifts {
        for _ in 0..100 {
            match heading_jacobian_fd_error(field, &point_in(&mut rng, -3.0, 3.0)) {
                Ok(e) => jac_err = jac_err.max(e),
                Err(e) => jac_fail = Some(e),
            }
        }
    }
    claims.push(match jac_fail {
        Some(e) => Claim::failed("fields.heading_jacobian_fd", &e),
        None => Claim::below("fields.heading_jacobian_fd", jac_err, 1e-5, "J(chi^p) vs central differences, 100 points per lift"),
    });

    let deriv_err = PARAMETRIC_NAMES
        .iter()
        .filter_map(|n| builtin_parametric(n, &[]).ok())
        .map(|p| path_derivative_fd_error(&p, 1000))
        .fold(0.0, f64::max);
    claims.push(Claim::below("fields.path_derivatives_fd", deriv_err, 1e-6, "f', f'' vs central differences, 1000 parameters per path"));

    let mut proj_err = 0.0f64;
    for _ in 0..20 {
        let a = point_in(&mut rng, -1.0, 1.0);
        if let Ok(op) = ProjectionOperator::new(a) {
            let m = op.matrix();
            proj_err = proj_err.max((m * m - m).amax()).max((m * a).amax());
        }
    }
    claims.push(Claim::below("fields.projection_idempotent", proj_err, 1e-12, "max |P^2 - P| and |P a| over random axes"));

    claims.push(catch("fields.planar_singular_points", || {
        let field = PlanarField::new(builtin_implicit("figure8_implicit", &[])?, 1.0, Psi::Identity)?;
        let roots = find_singular_points_2d(&field, &Aabb2::square(-2.0, 2.0), 41, 1e-6)?;
        let expected = [Vector2::new(0.0, -0.5f64.sqrt()), Vector2::zeros(), Vector2::new(0.0, 0.5f64.sqrt())];
        let worst = if roots.len() == 3 {
            expected
                .iter()
                .map(|e| roots.iter().map(|r| (r - e).norm()).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        Ok(Claim::below(
            "fields.planar_singular_points",
            worst,
            1e-6,
            format!("figure-8: {} roots found, max distance to (0, 0), (0, +-1/sqrt 2)", roots.len()),
        ))
    }));
    claims
}

/// The trefoil experiment: reference pose and gains, control at the RK4 step.
pub fn trefoil_scenario() -> Scenario {
    let mut s = Scenario::new(
        PathSpec::new("trefoil_projection", vec![]),
        ControllerSpec::Gvf(GvfSpec {
            s: 10.0,
            k1: 0.5,
            k2: 0.2,
            k_theta: 50.0,
            velocity_source: Default::default(),
            jacobian_mode: Default::default(),
        }),
        InitialState { x: 923.0, y: 545.0, theta: PI, w: 0.0 },
        240.0,
    );
    s.control_period = s.dt;
    s.sample_period = s.dt;
    s
}

fn control_claims(seed: u64) -> Vec<Claim> {
    let mut claims = Vec::new();
    let mut rng = stream_rng(seed, VERIFY_STREAM + 1);
    let path = match builtin_parametric("lemniscate", &[]) {
        Ok(p) => p,
        Err(e) => return vec![Claim::failed("control.path", &e)],
    };
    let field = SpatialField::from_path(&path, 1.0, 1.0).expect("positive gains");
    let s = 2.0;

    let (mut speed, mut lyap, mut scale) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let p = point_in(&mut rng, -2.0, 2.0);
        let theta = rng.random_range(-PI..PI);
        let chi = field.chi(&p);
        let Ok(jac) = field.jacobian_chi_p(&p) else { continue };
        let v = Vector2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (Ok(a), Ok(b)) = (
            gvf_law(&p, &chi, &jac, theta, Some(v), s, 1.5),
            gvf_law(&p, &(chi * 7.5), &jac, theta, Some(v), s, 1.5),
        ) else {
            continue;
        };
        speed = speed.max((a.v_u * a.v_u + a.w_dot.unwrap_or(f64::NAN).powi(2) - s * s).abs());
        scale = scale.max((a.v_u - b.v_u).abs()).max((a.omega_u - b.omega_u).abs());
        let h = Vector2::new(theta.cos(), theta.sin());
        let c = chi.xy().normalize();
        if let Ok(beta) = heading_error(&h, &c) {
            lyap = lyap.max((1.0 - beta.cos() - 0.5 * (h - c).norm_squared()).abs());
        }
    }
    claims.push(Claim::below("control.speed_identity", speed, 1e-9, "max |v_u^2 + w_dot^2 - s^2|"));
    claims.push(Claim::below("control.lyapunov_identity", lyap, 1e-12, "max |1 - cos beta - |h - chi^p|^2 / 2|"));
    claims.push(Claim::below("control.scale_invariance", scale, 1e-9, "max output change when chi is scaled by 7.5"));

    claims.push(catch("control.tracking_feedforward", || {
        let liss = builtin_parametric("lissajous", &[])?;
        let ctrl = TrajTrackController::new(liss, 0.05, 0.05, 1.0)?;
        let mut worst = 0.0f64;
        for i in 0..200 {
            let r = ctrl.reference(i as f64 * 1.7)?;
            let out = traj_track_law(&UnicycleState::new(r.x_d, r.y_d, r.theta_d), &r, ctrl.gains());
            worst = worst.max((out.v_u - r.v_d).abs()).max((out.omega_u - r.omega_d).abs());
        }
        Ok(Claim::below("control.tracking_feedforward", worst, 1e-9, "zero tracking error gives (v_d, omega_d)"))
    }));

    claims.push(catch("control.lyapunov_trefoil", || {
        let out = run_closed_loop(&trefoil_scenario())?;
        if let Some(e) = out.abort {
            return Err(e);
        }
        let series = lyapunov_series(&out.trace)?;
        Ok(Claim::below(
            "control.lyapunov_trefoil",
            series.max_increment.max(series.max_abs_beta_increment),
            1e-4,
            "trefoil run: max per-step increase of V and of |beta|",
        ))
    }));

    claims.push(catch("control.lyapunov_random", || {
        let mut worst = 0.0f64;
        for start in random_gvf_starts(&mut rng, 5)? {
            let out = run_closed_loop(&start)?;
            if let Some(e) = out.abort {
                return Err(e);
            }
            let series = lyapunov_series(&out.trace)?;
            worst = worst.max(series.max_increment).max(series.max_abs_beta_increment);
        }
        Ok(Claim::below("control.lyapunov_random", worst, 1e-4, "5 random trefoil starts: max per-step increase of V and |beta|"))
    }));
    claims
}

/// Trefoil closed-loop scenarios from random poses around the path with
/// `|beta(0)| < pi - 0.1`, each running 60 time units.
pub fn random_gvf_starts(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Scenario>> {
    let base = trefoil_scenario();
    let ControllerSpec::Gvf(g) = base.controller else { unreachable!() };
    let field = SpatialField::from_path(&base.path.build()?, g.k1, g.k2)?;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let init = InitialState {
            x: rng.random_range(300.0..900.0),
            y: rng.random_range(50.0..650.0),
            theta: rng.random_range(-PI..PI),
            w: rng.random_range(0.0..600.0),
        };
        let chi = field.chi(&Vector3::new(init.x, init.y, init.w));
        let h = Vector2::new(init.theta.cos(), init.theta.sin());
        let Ok(beta) = heading_error(&h, &chi.xy().normalize()) else { continue };
        if beta.abs() < PI - 0.1 {
            let mut s = base.clone();
            s.init = init;
            s.horizon = 60.0;
            out.push(s);
        }
    }
    Ok(out)
}

fn convergence_claims(seed: u64) -> Vec<Claim> {
    let mut claims = Vec::new();
    let mut rng = stream_rng(seed, VERIFY_STREAM + 2);

    claims.push(catch("convergence.global_lifted", || {
        let field = SpatialField::from_path(&builtin_parametric("lemniscate", &[])?, 1.0, 1.0)?;
        let opts = IntegrationOptions::new(0.01, 200.0).with_sample_period(0.1);
        let (mut worst, mut not_path) = (0.0f64, 0usize);
        for _ in 0..50 {
            let trace = run_integral_curve(&field, &point_in(&mut rng, -3.0, 3.0), &opts)?;
            let first = trace.records.iter().find(|r| r.err_norm < 1e-3).map_or(f64::INFINITY, |r| r.t);
            worst = worst.max(first);
            if classify_limit(&trace, &[], 1e-3) != LimitClass::ConvergedToPath {
                not_path += 1;
            }
        }
        let measured = if not_path > 0 { f64::INFINITY } else { worst };
        Ok(Claim::below("convergence.global_lifted", measured, 200.0, "50 lemniscate-lift starts: latest time err_norm < 1e-3"))
    }));

    claims.push(catch("convergence.dichotomy", || {
        let field = PlanarField::new(builtin_implicit("figure8_implicit", &[])?, 1.0, Psi::Identity)?;
        let singular = find_singular_points_2d(&field, &Aabb2::square(-2.0, 2.0), 41, 1e-6)?;
        let undecided = figure8_undecided(&field, &singular, &mut rng, 100)?;
        Ok(Claim::below("convergence.dichotomy", undecided as f64, 0.5, "undecided figure-8 trajectories out of 100"))
    }));

    claims.push(catch("convergence.projected", || {
        let field = SpatialField::from_path(&builtin_parametric("lemniscate", &[])?, 1.0, 1.0)?;
        let op = ProjectionOperator::drop_w();
        let opts = IntegrationOptions::new(0.01, 20.0).with_sample_period(0.1).with_distance(400);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..20 {
            let run = run_projected(&field, &op, &point_in(&mut rng, -3.0, 3.0), &opts)?;
            for (a, b) in run.lifted.records.iter().zip(&run.projected.records) {
                let gap = if b.w == 0.0 { b.dist - a.dist } else { f64::INFINITY };
                worst = worst.max(gap);
            }
        }
        Ok(Claim::below("convergence.projected", worst, 1e-9, "max dist(p', A') - dist(p, A), infinite if w' != 0"))
    }));

    claims.push(catch("convergence.rk4_order", || {
        let order = rk4_observed_order()?;
        Ok(Claim::at_least("convergence.rk4_order", order, 3.5, "observed order on the unit-circle lift"))
    }));

    claims.push(catch("convergence.trefoil_closed_loop", || {
        let mut s = trefoil_scenario();
        s.horizon = 240.0;
        let out = run_closed_loop(&s)?;
        if let Some(e) = out.abort {
            return Err(e);
        }
        let reached = out.trace.records.iter().find(|r| r.err_norm < 5.0).map_or(f64::INFINITY, |r| r.t);
        let tail = out.trace.tail(0.25).map(|r| r.err_norm).fold(0.0, f64::max);
        let measured = if tail < 5.0 { reached } else { f64::INFINITY };
        Ok(Claim::below("convergence.trefoil_closed_loop", measured, 120.0, "time err_norm first < 5 (infinite if the tail exceeds 5)"))
    }));
    claims
}

/// Number of random figure-8 integral curves from `[-1.5, 1.5]^2` that
/// neither settle on the zero set nor at a singular point by `T = 200`.
pub fn figure8_undecided(
    field: &PlanarField,
    singular: &[Vector2<f64>],
    rng: &mut ChaCha8Rng,
    n: usize,
) -> Result<usize> {
    let opts = IntegrationOptions::new(1e-3, 200.0).with_sample_period(0.1);
    let mut undecided = 0;
    for _ in 0..n {
        let q0 = Vector2::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let trace = run_planar_integral_curve(field, &q0, &opts)?;
        if trace.meta.abort.is_some() || classify_limit(&trace, singular, 1e-2) == LimitClass::Undecided {
            undecided += 1;
        }
    }
    Ok(undecided)
}

/// `log2` of the error ratio between steps `h` and `h / 2` against a
/// reference at `h / 16`, for a smooth off-path run on the unit-circle lift.
pub fn rk4_observed_order() -> Result<f64> {
    let field = SpatialField::from_path(&builtin_parametric("circle", &[])?, 1.0, 1.0)?;
    let p0 = Vector3::new(2.0, 0.5, 0.3);
    let end = |dt: f64| -> Result<Vector3<f64>> {
        let r = *run_integral_curve(&field, &p0, &IntegrationOptions::new(dt, 2.0).with_sample_period(2.0))?
            .last()
            .expect("non-empty trace");
        Ok(Vector3::new(r.x, r.y, r.w))
    };
    let h = 0.1;
    let reference = end(h / 16.0)?;
    let e1 = (end(h)? - reference).norm();
    let e2 = (end(h / 2.0)? - reference).norm();
    Ok((e1 / e2).log2())
}

/// Tail sup of the perturbed unit-circle lift for each bound in `rs`, plus
/// the final error under a decaying disturbance.
pub fn iss_table(rs: &[f64], seed: u64) -> Result<(Vec<f64>, f64)> {
    let field = SpatialField::from_path(&builtin_parametric("circle", &[])?, 1.0, 1.0)?;
    let p0 = Vector3::new(1.3, 0.2, 0.0);
    let opts = IntegrationOptions::new(0.01, 100.0).with_sample_period(0.05);
    let sups = rs
        .iter()
        .map(|&r| run_perturbed(&field, &DisturbanceModel::constant_bound(r, 0.1), &p0, &opts, seed).map(|o| o.tail_sup_err))
        .collect::<Result<Vec<_>>>()?;
    let decaying = run_perturbed(&field, &DisturbanceModel::decaying(0.2, 5.0, 0.1), &p0, &opts, seed)?;
    let last = decaying.trace.last().map_or(f64::INFINITY, |r| r.err_norm);
    Ok((sups, last))
}

fn robustness_claims(seed: u64) -> Vec<Claim> {
    let rs = [0.05, 0.1, 0.2];
    match iss_table(&rs, seed) {
        Ok((sups, last)) => {
            let drop = sups.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
            let finite = sups.iter().all(|s| s.is_finite());
            vec![
                Claim::below(
                    "robustness.ultimate_bound_monotone",
                    if finite { drop } else { f64::INFINITY },
                    1e-12,
                    format!("tail sup err_norm for r = {rs:?}: {sups:?}; measured is the largest decrease"),
                ),
                Claim::below("robustness.vanishing", last, 1e-2, "final err_norm under exponentially decaying d"),
            ]
        }
        Err(e) => vec![Claim::failed("robustness", &e)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn claim_bounds() {
        assert!(Claim::below("a", 0.5, 1.0, "").passed);
        assert!(!Claim::below("a", 1.0, 1.0, "").passed);
        assert!(Claim::at_least("a", 1.0, 1.0, "").passed);
        assert!(!Claim::below("a", f64::NAN, 1.0, "").passed);
    }

    #[test]
    fn fields_suite_passes() {
        let report = run_suite(Suite::Fields, 1);
        for c in &report.claims {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn robustness_suite_passes() {
        let report = run_suite(Suite::Robustness, 1);
        assert!(report.passed(), "{}", report.to_json());
    }
}

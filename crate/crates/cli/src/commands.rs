use std::io::Write;
use std::path::{Path, PathBuf};

use gvf_core::analysis::{find_singular_points_2d, run_suite, smoothness_metrics, Aabb2, Report, SmoothnessMetrics, Suite};
use gvf_core::field::{Aabb3, PlanarField, ProjectionOperator, Psi, SpatialField};
use gvf_core::geometry::{builtin_implicit, builtin_parametric, ParametricPath};
use gvf_core::sim::{run_closed_loop, run_projected, write_atomic, IntegrationOptions, Scenario, Trace};
use gvf_core::{Vector2, Vector3, EPS_NORM};
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::scenario_file::{ControllerKind, ScenarioFile, SimMode};

/// Sample count used for distances in integral-curve runs.
const INTEGRAL_DIST_RESOLUTION: usize = 2000;
/// Guiding and desired points are reported at these times.
pub const COMPARE_TIMES: [f64; 3] = [0.0, 2.0, 30.0];

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct GlobalOptions {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub dt: Option<f64>,
    pub quiet: bool,
}

impl GlobalOptions {
    fn say(&self, out: &mut dyn Write, line: std::fmt::Arguments<'_>) {
        if !self.quiet {
            let _ = writeln!(out, "{line}");
        }
    }
}

/// Loads a scenario file and applies `--seed` and `--dt`.
pub fn load_scenario(path: &Path, opts: &GlobalOptions) -> CliResult<ScenarioFile> {
    let mut file = ScenarioFile::load(path)?;
    if let Some(seed) = opts.seed {
        file.seed = seed;
    }
    if let Some(dt) = opts.dt {
        file.dt = dt;
    }
    Ok(file)
}

fn output_location(file: &ScenarioFile, scenario_path: &Path, opts: &GlobalOptions) -> (PathBuf, String) {
    let dir = opts
        .out_dir
        .clone()
        .or_else(|| file.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let stem = file.stem.clone().unwrap_or_else(|| {
        scenario_path
            .file_stem()
            .map_or_else(|| "run".to_string(), |s| s.to_string_lossy().into_owned())
    });
    (dir, stem)
}

fn write_trace(trace: &Trace, dir: &Path, stem: &str) -> CliResult<Vec<PathBuf>> {
    trace.write_files(dir, stem).map_err(|source| CliError::Write {
        path: dir.join(stem),
        source,
    })?;
    Ok(vec![dir.join(format!("{stem}.csv")), dir.join(format!("{stem}.json"))])
}

fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<PathBuf> {
    let err = |source| CliError::Write { path: path.to_path_buf(), source };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(err)?;
    }
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    write_atomic(path, text.as_bytes()).map_err(err)?;
    Ok(path.to_path_buf())
}

/// What `gvf run` produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub files: Vec<PathBuf>,
    pub final_err_norm: f64,
    pub tail_max_err_norm: f64,
    pub tail_rms_dist: f64,
}

fn summarize(trace: &Trace, files: Vec<PathBuf>) -> RunSummary {
    let tail: Vec<_> = trace.tail(0.25).collect();
    let rms = if tail.is_empty() {
        f64::NAN
    } else {
        (tail.iter().map(|r| r.dist * r.dist).sum::<f64>() / tail.len() as f64).sqrt()
    };
    RunSummary {
        files,
        final_err_norm: trace.last().map_or(f64::NAN, |r| r.err_norm),
        tail_max_err_norm: tail.iter().map(|r| r.err_norm).fold(f64::NAN, f64::max),
        tail_rms_dist: rms,
    }
}

/// `gvf run`: one closed-loop run, or an integral curve with its planar
/// projection when the scenario sets `mode = integral_curve`.
pub fn cmd_run(scenario_path: &Path, opts: &GlobalOptions, out: &mut dyn Write) -> CliResult<RunSummary> {
    let file = load_scenario(scenario_path, opts)?;
    let (dir, stem) = output_location(&file, scenario_path, opts);
    let summary = match file.mode {
        SimMode::ClosedLoop => {
            let scenario = file.scenario(file.kind)?;
            let outcome = run_closed_loop(&scenario)?;
            let files = write_trace(&outcome.trace, &dir, &stem)?;
            if let Some(e) = outcome.abort {
                return Err(CliError::Abort(format!("{e} (partial trace in {})", files[0].display())));
            }
            summarize(&outcome.trace, files)
        }
        SimMode::IntegralCurve => {
            let (k1, k2) = file.field_gains.expect("parser requires k1 and k2");
            let path = file.path.build()?;
            let field = SpatialField::from_path(&path, k1, k2)?;
            let opts_int = IntegrationOptions::new(file.dt, file.horizon)
                .with_sample_period(file.sample_period)
                .with_distance(INTEGRAL_DIST_RESOLUTION);
            opts_int.validate()?;
            let p0 = Vector3::new(file.init.x, file.init.y, file.init.w);
            let run = run_projected(&field, &ProjectionOperator::drop_w(), &p0, &opts_int)?;
            let mut files = write_trace(&run.lifted, &dir, &stem)?;
            files.extend(write_trace(&run.projected, &dir, &format!("{stem}_projected"))?);
            if let Some(reason) = &run.lifted.meta.abort {
                return Err(CliError::Abort(reason.clone()));
            }
            summarize(&run.lifted, files)
        }
    };
    for f in &summary.files {
        opts.say(out, format_args!("wrote {}", f.display()));
    }
    opts.say(
        out,
        format_args!(
            "final err_norm {:.6}; tail err_norm max {:.6}; tail dist rms {:.6}",
            summary.final_err_norm, summary.tail_max_err_norm, summary.tail_rms_dist
        ),
    );
    Ok(summary)
}

fn point_json(p: &Vector2<f64>) -> serde_json::Value {
    json!([p.x, p.y])
}

/// Robot position next to the guiding point (GVF) and the desired
/// trajectory point (tracking) at `t`.
pub fn compare_points(path: &ParametricPath, gvf: &Trace, track: &Trace, t: f64) -> Option<serde_json::Value> {
    let (g, k) = (gvf.at(t)?, track.at(t)?);
    let (robot_g, robot_k) = (Vector2::new(g.x, g.y), Vector2::new(k.x, k.y));
    let (guide, desired) = (path.point(g.w), path.point(k.t));
    Some(json!({
        "t": g.t,
        "gvf_robot": point_json(&robot_g),
        "guiding_point": point_json(&guide),
        "guiding_point_distance": (guide - robot_g).norm(),
        "traj_track_robot": point_json(&robot_k),
        "trajectory_point": point_json(&desired),
        "trajectory_point_distance": (desired - robot_k).norm(),
    }))
}

#[derive(Debug, Clone)]
pub struct CompareSummary {
    pub files: Vec<PathBuf>,
    pub gvf: SmoothnessMetrics,
    pub traj_track: SmoothnessMetrics,
    /// Metrics of the same pair without noise, when the scenario has noise.
    pub noise_free: Option<(SmoothnessMetrics, SmoothnessMetrics)>,
    pub report: serde_json::Value,
}

fn run_pair(gvf: &Scenario, track: &Scenario) -> CliResult<(Trace, Trace)> {
    let mut traces = Vec::with_capacity(2);
    for s in [gvf, track] {
        let outcome = run_closed_loop(s)?;
        if let Some(e) = outcome.abort {
            return Err(CliError::Abort(format!("{} run: {e}", s.controller.label())));
        }
        traces.push(outcome.trace);
    }
    let track = traces.pop().expect("two traces");
    Ok((traces.pop().expect("two traces"), track))
}

/// `gvf compare`: the GVF and trajectory-tracking controllers from the same
/// pose with the same seed and noise.
pub fn cmd_compare(scenario_path: &Path, opts: &GlobalOptions, out: &mut dyn Write) -> CliResult<CompareSummary> {
    let file = load_scenario(scenario_path, opts)?;
    if file.gvf.is_none() || file.traj_track.is_none() {
        return Err(CliError::Input(
            "compare needs both GVF gains (s, k1, k2, k_theta) and tracking gains (k1t, k2t, k3t)".into(),
        ));
    }
    let (dir, stem) = output_location(&file, scenario_path, opts);
    let gvf_s = file.scenario(ControllerKind::Gvf)?;
    let track_s = file.scenario(ControllerKind::TrajTrack)?;
    let (gvf_t, track_t) = run_pair(&gvf_s, &track_s)?;
    let mut files = write_trace(&gvf_t, &dir, &format!("{stem}_gvf"))?;
    files.extend(write_trace(&track_t, &dir, &format!("{stem}_traj_track"))?);

    let (mg, mt) = (smoothness_metrics(&gvf_t), smoothness_metrics(&track_t));
    let noise_free = if gvf_s.noise.is_some() {
        let (mut a, mut b) = (gvf_s.clone(), track_s.clone());
        a.noise = None;
        b.noise = None;
        let (ta, tb) = run_pair(&a, &b)?;
        Some((smoothness_metrics(&ta), smoothness_metrics(&tb)))
    } else {
        None
    };
    let path = gvf_s.path.build()?;
    let points: Vec<_> = COMPARE_TIMES.iter().filter_map(|&t| compare_points(&path, &gvf_t, &track_t, t)).collect();
    let at_two = points.iter().find(|p| (p["t"].as_f64().unwrap_or(f64::NAN) - 2.0).abs() < 1e-9);
    let rushes = at_two.map(|p| {
        p["guiding_point_distance"].as_f64().unwrap_or(f64::NAN) < p["trajectory_point_distance"].as_f64().unwrap_or(f64::NAN)
    });
    let report = json!({
        "seed": gvf_s.seed,
        "gvf_scenario_hash": gvf_s.hash(),
        "traj_track_scenario_hash": track_s.hash(),
        "gvf": mg,
        "traj_track": mt,
        "noise_free": noise_free.map(|(a, b)| json!({ "gvf": a, "traj_track": b })),
        "points": points,
        "claims": {
            "gvf_heading_variation_smaller": mg.heading_total_variation < mt.heading_total_variation,
            "guiding_point_closer_at_t2": rushes,
            "noise_free_tail_rms_below_1": noise_free.map(|(a, b)| a.err_rms < 1.0 && b.err_rms < 1.0),
        },
    });
    files.push(write_json(&dir.join(format!("{stem}_compare.json")), &report)?);

    for f in &files {
        opts.say(out, format_args!("wrote {}", f.display()));
    }
    opts.say(
        out,
        format_args!(
            "heading total variation: gvf {:.3}, traj_track {:.3}",
            mg.heading_total_variation, mt.heading_total_variation
        ),
    );
    opts.say(out, format_args!("speed reversals: gvf {}, traj_track {}", mg.reversal_count, mt.reversal_count));
    opts.say(out, format_args!("tail dist rms: gvf {:.4}, traj_track {:.4}", mg.err_rms, mt.err_rms));
    if let Some((a, b)) = noise_free {
        opts.say(out, format_args!("noise-free tail dist rms: gvf {:.4}, traj_track {:.4}", a.err_rms, b.err_rms));
    }
    Ok(CompareSummary { files, gvf: mg, traj_track: mt, noise_free, report })
}

/// Arguments of `gvf singular-map`.
#[derive(Debug, Clone)]
pub struct SingularMapArgs {
    pub path: String,
    pub params: Vec<f64>,
    pub k: f64,
    /// `[xmin, xmax, ymin, ymax]`.
    pub region: [f64; 4],
    pub grid: usize,
    pub tol: f64,
    /// Use the lifted 3D field (sliced at `w = 0` for the quiver data).
    pub lifted: bool,
    /// `w` range scanned for the minimum field norm in lifted mode.
    pub w_range: [f64; 2],
}

impl Default for SingularMapArgs {
    fn default() -> Self {
        Self {
            path: "figure8_implicit".into(),
            params: Vec::new(),
            k: 1.0,
            region: [-2.0, 2.0, -2.0, 2.0],
            grid: 41,
            tol: 1e-6,
            lifted: false,
            w_range: [-2.0, 2.0],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SingularMapSummary {
    pub files: Vec<PathBuf>,
    pub singular_points: Vec<Vector2<f64>>,
    /// Smallest `||chi||` over the scanned box, lifted mode only.
    pub min_norm: Option<f64>,
}

/// `gvf singular-map`: normalized quiver samples of a field over a box and
/// the refined list of its zeros.
pub fn cmd_singular_map(args: &SingularMapArgs, opts: &GlobalOptions, out: &mut dyn Write) -> CliResult<SingularMapSummary> {
    let [x0, x1, y0, y1] = args.region;
    if !(x1 > x0 && y1 > y0) {
        return Err(CliError::Input(format!("box must satisfy xmin < xmax and ymin < ymax, got {:?}", args.region)));
    }
    if args.grid < 8 {
        return Err(CliError::Input(format!("grid must be at least 8, got {}", args.grid)));
    }
    let region = Aabb2::new(Vector2::new(x0, y0), Vector2::new(x1, y1));
    let mut csv = String::from("x,y,u,v,is_near_singular\n");
    let cell = ((x1 - x0).max(y1 - y0)) / (args.grid - 1) as f64;

    let (points, min_norm): (Vec<Vector2<f64>>, Option<f64>) = if args.lifted {
        let path = builtin_parametric(&args.path, &args.params)?;
        let field = SpatialField::from_path(&path, args.k, args.k)?;
        let scan = Aabb3::new(Vector3::new(x0, y0, args.w_range[0]), Vector3::new(x1, y1, args.w_range[1]));
        (Vec::new(), Some(field.min_field_norm(&scan, args.grid)))
    } else {
        let path = builtin_implicit(&args.path, &args.params).map_err(|e| {
            CliError::Input(format!("{e}; parametric paths need --lifted"))
        })?;
        let field = PlanarField::new(path, args.k, Psi::Identity)?;
        (find_singular_points_2d(&field, &region, args.grid, args.tol)?, None)
    };

    let planar = (!args.lifted)
        .then(|| builtin_implicit(&args.path, &args.params).ok())
        .flatten()
        .map(|p| PlanarField::new(p, args.k, Psi::Identity))
        .transpose()?;
    let spatial = if args.lifted {
        Some(SpatialField::from_path(&builtin_parametric(&args.path, &args.params)?, args.k, args.k)?)
    } else {
        None
    };
    for i in 0..args.grid {
        for j in 0..args.grid {
            let q = region.node(args.grid, i, j);
            let v = match (&planar, &spatial) {
                (Some(f), _) => f.eval(&q),
                (_, Some(f)) => f.chi(&Vector3::new(q.x, q.y, 0.0)).xy(),
                _ => unreachable!("one field is always built"),
            };
            let n = v.norm();
            let u = if n < EPS_NORM { Vector2::zeros() } else { v / n };
            let near = points.iter().any(|s| (s - q).norm() <= cell);
            csv.push_str(&format!("{},{},{},{},{}\n", q.x, q.y, u.x, u.y, u8::from(near)));
        }
    }

    let dir = opts.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let stem = format!("singular_map_{}{}", args.path, if args.lifted { "_lifted" } else { "" });
    std::fs::create_dir_all(&dir).map_err(|source| CliError::Write { path: dir.clone(), source })?;
    let csv_path = dir.join(format!("{stem}.csv"));
    write_atomic(&csv_path, csv.as_bytes()).map_err(|source| CliError::Write { path: csv_path.clone(), source })?;
    let json_path = write_json(
        &dir.join(format!("{stem}_points.json")),
        &json!({
            "path": args.path,
            "k": args.k,
            "lifted": args.lifted,
            "singular_points": points.iter().map(point_json).collect::<Vec<_>>(),
            "min_field_norm": min_norm,
        }),
    )?;

    opts.say(out, format_args!("wrote {}", csv_path.display()));
    opts.say(out, format_args!("wrote {}", json_path.display()));
    opts.say(out, format_args!("{} singular points", points.len()));
    for p in &points {
        opts.say(out, format_args!("  ({:.9}, {:.9})", p.x, p.y));
    }
    if let Some(m) = min_norm {
        opts.say(out, format_args!("min |chi| = {m:.9}"));
    }
    Ok(SingularMapSummary { files: vec![csv_path, json_path], singular_points: points, min_norm })
}

/// `gvf verify`: runs a claim suite and writes its JSON report. Failing
/// claims are reported through [`CliError::ClaimsFailed`] after the report
/// is written.
pub fn cmd_verify(suite: &str, opts: &GlobalOptions, out: &mut dyn Write) -> CliResult<Report> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, opts.seed.unwrap_or(0));
    let dir = opts.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let path = write_json(
        &dir.join(format!("verify_{suite}.json")),
        &serde_json::to_value(&report).expect("report serializes"),
    )?;
    for c in &report.claims {
        opts.say(
            out,
            format_args!("{} {} measured {:e} tolerance {:e}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.measured, c.tolerance),
        );
    }
    opts.say(out, format_args!("wrote {}", path.display()));
    let failed = report.claims.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::ClaimsFailed { failed, total: report.claims.len() });
    }
    Ok(report)
}

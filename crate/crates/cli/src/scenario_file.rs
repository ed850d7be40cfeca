//! The `.scenario` text format: `key = value` lines grouped under
//! `[section]` headers, `#` or `;` comments, unknown sections or keys
//! rejected with their line and column.
//!
//! ```text
//! [path]
//! name = trefoil_projection
//!
//! [controller]
//! s = 10
//! k1 = 0.5
//! k2 = 0.2
//! k_theta = 50
//!
//! [init]
//! x = 923
//! y = 545
//! theta = pi
//!
//! [sim]
//! horizon = 240
//! ```
//!
//! Numbers use `.` as the decimal separator. Angles and other values may
//! also be written with `pi`: `pi`, `-pi/2`, `2*pi`, `3pi/4`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gvf_core::control::VelocitySource;
use gvf_core::field::JacobianMode;
use gvf_core::sim::{
    ControllerSpec, DisturbanceKind, DisturbanceModel, GvfSpec, InitialState, NoiseModel, PathSpec, Scenario,
    TrajTrackSpec, DEFAULT_CONTROL_PERIOD, DEFAULT_DIST_RESOLUTION, DEFAULT_DT,
};

use crate::error::{CliError, CliResult};

const SECTIONS: [(&str, &[&str]); 7] = [
    ("path", &["name", "params"]),
    (
        "controller",
        &["kind", "s", "k1", "k2", "k_theta", "velocity_source", "jacobian_mode", "k1t", "k2t", "k3t"],
    ),
    ("init", &["x", "y", "theta", "w"]),
    (
        "sim",
        &["mode", "dt", "control_period", "sample_period", "horizon", "seed", "dist_resolution"],
    ),
    ("noise", &["power", "sample_time"]),
    ("disturbance", &["kind", "r", "tau", "hold"]),
    ("output", &["dir", "stem"]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControllerKind {
    Gvf,
    TrajTrack,
}

/// What `gvf run` does with the scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Unicycle plus controller.
    ClosedLoop,
    /// Integral curve of the lifted field from `(x, y, w)` and its
    /// projection onto the plane; only `k1` and `k2` are used.
    IntegralCurve,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub path: PathSpec,
    pub kind: ControllerKind,
    pub gvf: Option<GvfSpec>,
    pub traj_track: Option<TrajTrackSpec>,
    /// Gains of the lifted field, available whenever `k1` and `k2` are given.
    pub field_gains: Option<(f64, f64)>,
    pub init: InitialState,
    pub mode: SimMode,
    pub dt: f64,
    pub control_period: f64,
    pub sample_period: f64,
    pub horizon: f64,
    pub seed: u64,
    pub dist_resolution: usize,
    pub noise: Option<NoiseModel>,
    pub disturbance: Option<DisturbanceModel>,
    pub out_dir: Option<PathBuf>,
    pub stem: Option<String>,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
    column: usize,
}

#[derive(Debug, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, Entry>,
}

struct Parser<'a> {
    file: &'a str,
    sections: BTreeMap<String, Section>,
}

impl Parser<'_> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            file: self.file.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.sections.get(section).and_then(|s| s.entries.get(key))
    }

    fn has(&self, section: &str, key: &str) -> bool {
        self.entry(section, key).is_some()
    }

    fn missing(&self, section: &str, key: &str) -> CliError {
        let line = self.sections.get(section).map_or(1, |s| s.line);
        self.error(line, 1, format!("missing required key `{key}` in [{section}]"))
    }

    fn number(&self, section: &str, key: &str) -> CliResult<Option<f64>> {
        let Some(e) = self.entry(section, key) else { return Ok(None) };
        parse_number(&e.value)
            .map(Some)
            .ok_or_else(|| self.error(e.line, e.column, format!("`{key}`: expected a finite number, got `{}`", e.value)))
    }

    fn required(&self, section: &str, key: &str) -> CliResult<f64> {
        self.number(section, key)?.ok_or_else(|| self.missing(section, key))
    }

    fn or(&self, section: &str, key: &str, default: f64) -> CliResult<f64> {
        Ok(self.number(section, key)?.unwrap_or(default))
    }

    fn unsigned(&self, section: &str, key: &str) -> CliResult<Option<u64>> {
        let Some(e) = self.entry(section, key) else { return Ok(None) };
        e.value
            .parse::<u64>()
            .map(Some)
            .map_err(|_| self.error(e.line, e.column, format!("`{key}`: expected a non-negative integer, got `{}`", e.value)))
    }

    fn choice<T: Copy>(&self, section: &str, key: &str, options: &[(&str, T)]) -> CliResult<Option<T>> {
        let Some(e) = self.entry(section, key) else { return Ok(None) };
        options.iter().find(|(name, _)| *name == e.value).map(|(_, v)| Some(*v)).ok_or_else(|| {
            let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
            self.error(e.line, e.column, format!("`{key}`: expected one of {}, got `{}`", names.join(", "), e.value))
        })
    }
}

/// Parses a number, accepting `pi` forms such as `-pi/2` or `3*pi/4`.
pub fn parse_number(text: &str) -> Option<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    let value = if let Some(idx) = body.find("pi") {
        let (coef, rest) = body.split_at(idx);
        let rest = &rest[2..];
        let coef = match coef.strip_suffix('*').unwrap_or(coef) {
            "" => 1.0,
            c => c.parse::<f64>().ok()?,
        };
        let div = match rest.strip_prefix('/') {
            Some(d) => d.parse::<f64>().ok()?,
            None if rest.is_empty() => 1.0,
            None => return None,
        };
        coef * std::f64::consts::PI / div
    } else {
        if body.starts_with(['+', '-']) {
            return None;
        }
        body.parse::<f64>().ok()?
    };
    let v = sign * value;
    v.is_finite().then_some(v)
}

fn strip_comment(line: &str) -> &str {
    match line.find(['#', ';']) {
        Some(i) => &line[..i],
        None => line,
    }
}

impl ScenarioFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses scenario text; `file` only labels error messages.
    pub fn parse(text: &str, file: &str) -> CliResult<Self> {
        let mut p = Parser { file, sections: BTreeMap::new() };
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = strip_comment(raw);
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            if let Some(inner) = trimmed.strip_prefix('[') {
                let Some(name) = inner.strip_suffix(']') else {
                    return Err(p.error(line, indent + 1, "unterminated section header"));
                };
                let name = name.trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) {
                    let valid: Vec<&str> = SECTIONS.iter().map(|(s, _)| *s).collect();
                    return Err(p.error(line, indent + 2, format!("unknown section [{name}]; expected one of {}", valid.join(", "))));
                }
                if p.sections.contains_key(name) {
                    return Err(p.error(line, indent + 1, format!("duplicate section [{name}]")));
                }
                p.sections.insert(name.to_string(), Section { line, entries: BTreeMap::new() });
                current = Some(name.to_string());
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(p.error(line, indent + 1, "expected `key = value` or a [section] header"));
            };
            let Some(section) = current.clone() else {
                return Err(p.error(line, indent + 1, "key outside of any [section]"));
            };
            let key = content[..eq].trim();
            let allowed = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return Err(p.error(
                    line,
                    indent + 1,
                    format!("unknown key `{key}` in [{section}]; expected one of {}", allowed.join(", ")),
                ));
            }
            let after = &content[eq + 1..];
            let value = after.trim();
            let column = eq + 2 + (after.len() - after.trim_start().len());
            if value.is_empty() {
                return Err(p.error(line, column, format!("`{key}` has an empty value")));
            }
            let entries = &mut p.sections.get_mut(&section).expect("section exists").entries;
            if entries.contains_key(key) {
                return Err(p.error(line, indent + 1, format!("duplicate key `{key}` in [{section}]")));
            }
            entries.insert(key.to_string(), Entry { value: value.to_string(), line, column });
        }
        Self::from_parser(&p)
    }

    fn from_parser(p: &Parser<'_>) -> CliResult<Self> {
        let name = p.entry("path", "name").ok_or_else(|| p.missing("path", "name"))?.value.clone();
        let params = match p.entry("path", "params") {
            None => Vec::new(),
            Some(e) => e
                .value
                .split(',')
                .map(|s| parse_number(s).ok_or_else(|| p.error(e.line, e.column, format!("`params`: bad number `{}`", s.trim()))))
                .collect::<CliResult<Vec<f64>>>()?,
        };

        let mode = p
            .choice("sim", "mode", &[("closed_loop", SimMode::ClosedLoop), ("integral_curve", SimMode::IntegralCurve)])?
            .unwrap_or(SimMode::ClosedLoop);

        let has_gvf = ["s", "k_theta"].iter().any(|k| p.has("controller", k));
        let has_track = ["k1t", "k2t", "k3t"].iter().any(|k| p.has("controller", k));
        let kind = p
            .choice("controller", "kind", &[("gvf", ControllerKind::Gvf), ("traj_track", ControllerKind::TrajTrack)])?
            .unwrap_or(if has_gvf || !has_track { ControllerKind::Gvf } else { ControllerKind::TrajTrack });

        let field_gains = match (p.number("controller", "k1")?, p.number("controller", "k2")?) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        let needs_gvf = mode == SimMode::ClosedLoop && (kind == ControllerKind::Gvf || has_gvf);
        let gvf = if needs_gvf {
            Some(GvfSpec {
                s: p.required("controller", "s")?,
                k1: p.required("controller", "k1")?,
                k2: p.required("controller", "k2")?,
                k_theta: p.required("controller", "k_theta")?,
                velocity_source: p
                    .choice(
                        "controller",
                        "velocity_source",
                        &[("measured", VelocitySource::Measured), ("commanded", VelocitySource::Commanded)],
                    )?
                    .unwrap_or_default(),
                jacobian_mode: p
                    .choice(
                        "controller",
                        "jacobian_mode",
                        &[("analytic", JacobianMode::Analytic), ("finite_difference", JacobianMode::FiniteDifference)],
                    )?
                    .unwrap_or_default(),
            })
        } else {
            None
        };
        let traj_track = if kind == ControllerKind::TrajTrack || has_track {
            Some(TrajTrackSpec {
                k1t: p.required("controller", "k1t")?,
                k2t: p.required("controller", "k2t")?,
                k3t: p.required("controller", "k3t")?,
            })
        } else {
            None
        };
        if mode == SimMode::IntegralCurve && field_gains.is_none() {
            return Err(p.missing("controller", if p.has("controller", "k1") { "k2" } else { "k1" }));
        }

        let init = InitialState {
            x: p.required("init", "x")?,
            y: p.required("init", "y")?,
            theta: match mode {
                SimMode::ClosedLoop => p.required("init", "theta")?,
                SimMode::IntegralCurve => p.or("init", "theta", 0.0)?,
            },
            w: p.or("init", "w", 0.0)?,
        };

        let noise = match p.sections.contains_key("noise") {
            false => None,
            true => Some(NoiseModel {
                power: p.required("noise", "power")?,
                sample_time: p.required("noise", "sample_time")?,
            }),
        };
        let disturbance = match p.sections.contains_key("disturbance") {
            false => None,
            true => Some(DisturbanceModel {
                kind: p
                    .choice(
                        "disturbance",
                        "kind",
                        &[("constant_bound", DisturbanceKind::ConstantBound), ("decaying", DisturbanceKind::Decaying)],
                    )?
                    .ok_or_else(|| p.missing("disturbance", "kind"))?,
                r: p.required("disturbance", "r")?,
                tau: p.or("disturbance", "tau", f64::INFINITY)?,
                hold: p.or("disturbance", "hold", 0.1)?,
            }),
        };

        let dist_resolution = match p.unsigned("sim", "dist_resolution")? {
            Some(n) => n as usize,
            None => DEFAULT_DIST_RESOLUTION,
        };
        Ok(Self {
            path: PathSpec::new(name, params),
            kind,
            gvf,
            traj_track,
            field_gains,
            init,
            mode,
            dt: p.or("sim", "dt", DEFAULT_DT)?,
            control_period: p.or("sim", "control_period", DEFAULT_CONTROL_PERIOD)?,
            sample_period: p.or("sim", "sample_period", DEFAULT_CONTROL_PERIOD)?,
            horizon: p.required("sim", "horizon")?,
            seed: p.unsigned("sim", "seed")?.unwrap_or(0),
            dist_resolution,
            noise,
            disturbance,
            out_dir: p.entry("output", "dir").map(|e| PathBuf::from(&e.value)),
            stem: p.entry("output", "stem").map(|e| e.value.clone()),
        })
    }

    /// The closed-loop scenario for one controller.
    pub fn scenario(&self, kind: ControllerKind) -> CliResult<Scenario> {
        let controller = match kind {
            ControllerKind::Gvf => ControllerSpec::Gvf(
                self.gvf
                    .ok_or_else(|| CliError::Input("scenario has no GVF gains (s, k1, k2, k_theta)".into()))?,
            ),
            ControllerKind::TrajTrack => ControllerSpec::TrajTrack(
                self.traj_track
                    .ok_or_else(|| CliError::Input("scenario has no trajectory-tracking gains (k1t, k2t, k3t)".into()))?,
            ),
        };
        let scenario = Scenario {
            path: self.path.clone(),
            controller,
            init: self.init,
            dt: self.dt,
            control_period: self.control_period,
            horizon: self.horizon,
            sample_period: self.sample_period,
            noise: self.noise,
            disturbance: self.disturbance,
            seed: self.seed,
            dist_resolution: self.dist_resolution,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

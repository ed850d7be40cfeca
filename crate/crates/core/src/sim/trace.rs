use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub const CSV_HEADER: &str = "t,x,y,theta,w,v_u,omega_u,phi1,phi2,err_norm,beta,dist";

/// How the measurement-noise model is realised, echoed into every sidecar.
pub const NOISE_SEMANTICS: &str =
    "zero-order-held Gaussian on perceived position, per-axis std sqrt(power / sample_time), redrawn every sample_time";

/// One sampled row. Columns that do not apply to a run are `NaN`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub w: f64,
    pub v_u: f64,
    pub omega_u: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub err_norm: f64,
    pub beta: f64,
    pub dist: f64,
}

impl TraceRecord {
    /// A record at time `t` with every other column `NaN`.
    pub fn empty(t: f64) -> Self {
        let n = f64::NAN;
        Self {
            t,
            x: n,
            y: n,
            theta: n,
            w: n,
            v_u: n,
            omega_u: n,
            phi1: n,
            phi2: n,
            err_norm: n,
            beta: n,
            dist: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    /// Short label of what produced the trace, e.g. `closed_loop/gvf`.
    pub kind: String,
    pub version: String,
    pub seed: Option<u64>,
    /// Hex SHA-256 of the canonical scenario JSON.
    pub scenario_hash: Option<String>,
    pub scenario: Option<serde_json::Value>,
    pub noise_semantics: String,
    /// Reason the run stopped early, if it did.
    pub abort: Option<String>,
    /// Set when the start lies outside the set covered by the Lyapunov
    /// argument (heading exactly opposite to the field).
    pub excluded_initial_condition: bool,
}

impl TraceMeta {
    pub fn new(kind: impl Into<String>) -> Self {
        Self {
            kind: kind.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            scenario_hash: None,
            scenario: None,
            noise_semantics: NOISE_SEMANTICS.to_string(),
            abort: None,
            excluded_initial_condition: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub meta: TraceMeta,
}

impl Trace {
    pub fn new(meta: TraceMeta) -> Self {
        Self { records: Vec::new(), meta }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn horizon(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.t)
    }

    /// Records with `t >= t0`.
    pub fn since(&self, t0: f64) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(move |r| r.t >= t0)
    }

    /// Records in the final `fraction` of the recorded time span.
    pub fn tail(&self, fraction: f64) -> impl Iterator<Item = &TraceRecord> {
        let (t0, t1) = match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => (a.t, b.t),
            _ => (0.0, 0.0),
        };
        self.since(t1 - fraction * (t1 - t0))
    }

    /// Record whose time is closest to `t`.
    pub fn at(&self, t: f64) -> Option<&TraceRecord> {
        self.records
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }

    /// CSV text; floats use the shortest round-trip representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.t, r.x, r.y, r.theta, r.w, r.v_u, r.omega_u, r.phi1, r.phi2, r.err_norm, r.beta, r.dist
            );
        }
        out
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.meta).expect("metadata is always serializable")
    }

    /// Writes `<stem>.csv` and `<stem>.json` into `dir`, each atomically.
    pub fn write_files(&self, dir: &Path, stem: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(dir)?;
        write_atomic(&dir.join(format!("{stem}.csv")), self.to_csv().as_bytes())?;
        write_atomic(&dir.join(format!("{stem}.json")), self.metadata_json().as_bytes())
    }
}

/// Writes to a temporary sibling file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

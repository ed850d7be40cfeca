use thiserror::Error;

pub type Result<T> = std::result::Result<T, GvfError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GvfError {
    #[error("unknown path `{name}`; valid names: {}", valid.join(", "))]
    UnknownPath { name: String, valid: Vec<&'static str> },

    #[error("path `{name}` takes at most {max} parameters, got {got}")]
    BadPathParams { name: String, max: usize, got: usize },

    #[error("invalid parameter `{key}`: {reason}")]
    InvalidParameter { key: String, reason: String },

    /// The planar part of the field vanished; no heading can be derived.
    #[error("singular heading at p = ({x}, {y}, {w}): chi1^2 + chi2^2 = {norm_sq:e}")]
    SingularHeading { x: f64, y: f64, w: f64, norm_sq: f64 },

    #[error("desired trajectory stalled at t = {t}: v_d = {v_d:e}")]
    StalledTrajectory { t: f64, v_d: f64 },

    #[error("contract violation: {0}")]
    Contract(String),
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown material `{name}` (available: {})", available.join(", "))]
    UnknownMaterial { name: String, available: Vec<String> },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value for {quantity}")]
    NonFinite { quantity: &'static str },

    #[error("step size {dt} s exceeds the stable maximum {max} s (need at least 50 steps per period)")]
    StepSize { dt: f64, max: f64 },

    #[error("integration unstable at t = {time} s: |{variable}| = {value} rad exceeds 1e3 rad")]
    Instability {
        time: f64,
        variable: &'static str,
        value: f64,
    },

    #[error("quaternion norm drifted by {drift} in one step at t = {time} s")]
    QuaternionDrift { time: f64, drift: f64 },

    #[error("orientation at t = {time} s is at the pitch singularity (beta = +/-90 deg)")]
    GimbalLock { time: f64 },

    #[error("sensor has no levitation height; the image field and beta mode are undefined")]
    MissingImageField,

    #[error("no sign change of {what} in bracket [{lo}, {hi}]")]
    NoCrossing { what: &'static str, lo: f64, hi: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown {kind} `{name}` (available: {})", available.join(", "))]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: Vec<String>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Returns `value` if it is finite, otherwise a [`Error::NonFinite`] naming `quantity`.
pub(crate) fn finite(quantity: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { quantity })
    }
}

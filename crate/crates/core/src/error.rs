use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("channel {0} is empty, mean internuclear distance undefined")]
    EmptyChannel(&'static str),

    #[error("{path}: line {line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("dataset is missing the `{0}` curve")]
    MissingCurve(&'static str),

    #[error("dataset invariant violated: {0}")]
    Invariant(String),

    #[error("curve `{curve}` has no extrapolation rule below R = {first} bohr (asked for R = {r})")]
    OutOfDomain { curve: String, first: f64, r: f64 },

    #[error("no vibrational level v = {0} on this grid")]
    NoSuchLevel(usize),

    #[error("eigenvalue search did not converge: {0}")]
    NoConvergence(String),

    #[error("energy {energy} hartree is below the dissociation threshold {threshold} hartree")]
    BelowThreshold { energy: f64, threshold: f64 },

    #[error("asymptotic matching window is not field free: {0}")]
    NotAsymptotic(String),

    #[error("invalid rate parameters: {0}")]
    Rate(String),

    #[error("photon indices {0} and {1} differ by an even number; the pair is not one-photon coupled")]
    EvenPhotonDifference(i32, i32),

    #[error("no sign change of the diabatic gap on [{0}, {1}] bohr")]
    NoCrossing(f64, f64),

    #[error("energy axes differ")]
    AxisMismatch,

    #[error("channel populations drifted: total = {total:.12} at t = {t:.3} a.u.")]
    ConservationViolated { total: f64, t: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("unit mismatch for `{key}`: expected `{expected}`, found `{found}`")]
    UnitMismatch {
        key: String,
        expected: String,
        found: String,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag, used for the CLI's JSON error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Grid(_) => "grid",
            Error::EmptyChannel(_) => "empty_channel",
            Error::Parse { .. } => "parse",
            Error::MissingCurve(_) => "missing_curve",
            Error::Invariant(_) => "invariant",
            Error::OutOfDomain { .. } => "out_of_domain",
            Error::NoSuchLevel(_) => "no_such_level",
            Error::NoConvergence(_) => "no_convergence",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::NotAsymptotic(_) => "not_asymptotic",
            Error::Rate(_) => "rate",
            Error::EvenPhotonDifference(..) => "even_photon_difference",
            Error::NoCrossing(..) => "no_crossing",
            Error::AxisMismatch => "axis_mismatch",
            Error::ConservationViolated { .. } => "conservation",
            Error::Config(_) => "config",
            Error::UnknownKey(_) => "unknown_key",
            Error::UnitMismatch { .. } => "unit_mismatch",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

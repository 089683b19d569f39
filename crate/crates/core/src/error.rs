use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("squeeze parameter outside the open unit disk: |z| = {0}")]
    Domain(f64),

    #[error("inconsistent (xi, eta, sigma) state: {0}")]
    InvalidState(String),

    #[error("truncation too small: tail mass {tail:.3e} exceeds {tolerance:.1e} (N = {dim})")]
    Truncation { tail: f64, tolerance: f64, dim: usize },

    #[error("unsupported moment order {0} (only 1, 2, 3)")]
    UnsupportedOrder(u32),

    #[error("integration diverged at t = {t}: {reason}")]
    Divergence { t: f64, reason: String },

    #[error("{mode} mode is unstable (a = {a}, q = {q}); quasienergy undefined")]
    UnstableMode { mode: &'static str, a: f64, q: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot read configuration: {0}")]
    Parse(String),

    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

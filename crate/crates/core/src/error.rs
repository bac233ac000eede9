use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("no rows")]
    NoRows,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("require 0 < ρ < ‖b‖ (ρ = {rho}, ‖b‖ = {bnorm})")]
    InvalidRho { rho: f64, bnorm: f64 },

    #[error("lambda_inf = 0; constrained problem degenerate")]
    DegenerateLambdaInf,

    #[error("invalid bracket: phi({lower}) - rho = {f_lower}, phi({upper}) - rho = {f_upper}")]
    InvalidBracket {
        lower: f64,
        upper: f64,
        f_lower: f64,
        f_upper: f64,
    },

    #[error("rho too small for numeric range")]
    RhoTooSmall,

    #[error("degenerate secant step at x = {x}: f_k = f_(k-1)")]
    DegenerateSecant { x: f64 },

    #[error("derivative undefined at zero support")]
    ZeroSupport,

    #[error("{0}")]
    Unsupported(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

use crate::timescale::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{t} is not a point of the time scale")]
    NotInTimeScale { t: f64 },

    #[error("no time-scale point on the {side:?} side of {t}")]
    EmptySide { t: f64, side: Side },

    #[error("invalid time scale: {0}")]
    InvalidTimeScale(String),

    #[error("triangular fuzzy number requires a <= b <= c, got ({a}, {b}, {c})")]
    OrderViolation { a: f64, b: f64, c: f64 },

    #[error("alpha grids differ: K = {left} vs K = {right}")]
    GridMismatch { left: usize, right: usize },

    #[error("alpha = {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("invalid fuzzy number: {0}")]
    InvalidFuzzyNumber(String),

    #[error("gH-difference does not exist at probe point {at}")]
    GhNonexistent { at: f64 },

    #[error("one-sided limit estimates disagree: residual {residual:e} exceeds tolerance {tol:e}")]
    LimitDisagreement { residual: f64, tol: f64 },

    #[error("{t} is outside the derivative domain: {reason}")]
    NotInDomain { t: f64, reason: String },

    #[error("endpoint derivative at alpha = {alpha} does not exist two-sidedly")]
    EndpointDerivativeMissing { alpha: f64 },

    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("invalid probe configuration: {0}")]
    InvalidConfig(String),
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty state")]
    EmptyState,
    #[error("negative kinetic density {0}")]
    NegativeDensity(f64),
    #[error("negative water height {0}")]
    NegativeHeight(f64),
    #[error("CFL violated: sigma * v_m = {courant} exceeds beta = {beta}")]
    CflViolated { courant: f64, beta: f64 },
    #[error("CFL fraction out of range: beta = {0} must lie in (0, 1)")]
    CflFractionOutOfRange(f64),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("length mismatch: expected {expected}, got {got} ({what})")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("infeasible counterexample data: right height {h_r} must be positive")]
    InfeasibleData { h_r: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

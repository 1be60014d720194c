use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unimodular (|det| = {det})")]
    NotUnimodular { det: String },
    #[error("matrix does not represent an isodual type: {reason}")]
    NotIsodual { reason: String },
    #[error("invalid index (k, l) = ({k}, {l}) for a real component")]
    InvalidIndex { k: u64, l: u64 },
    #[error("real splitting failed: residual {residual:e} exceeds tolerance {tol:e}")]
    SplitFailed { residual: f64, tol: f64 },
    #[error("point outside the Siegel upper half-space: {reason}")]
    NotInSiegelSpace { reason: String },
    #[error("point outside the parameter ball: {reason}")]
    OutsideBall { reason: String },
    #[error("parameter not in the upper half-plane: {reason}")]
    NotInHalfPlane { reason: String },
    #[error("matrix is not a member of the variety (residual {residual:e})")]
    NotMember { residual: f64 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("numerical instability: {reason}")]
    NumericalInstability { reason: String },
    #[error("search budget exceeded: {reason}")]
    SearchBudgetExceeded { reason: String },
    #[error("unknown constant {0:?}")]
    UnknownConstant(String),
    #[error("catalog entry {0:?} not found")]
    NotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension out of range: n = {0} (supported 1 ≤ n ≤ 8)")]
    BadDimension(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

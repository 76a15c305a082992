//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the laboratory's numerical operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point lies outside the domain closure (gauge = {gauge})")]
    OutsideDomain { gauge: f64 },

    #[error("point lies outside the open domain (gauge = {gauge})")]
    NotInterior { gauge: f64 },

    #[error("unsupported domain kind for this operation: {0}")]
    UnsupportedDomain(String),

    #[error("integral flagged divergent: {reason}")]
    Divergent { reason: String },

    #[error("integrand is not integrable: exponent beta = {beta} >= 1")]
    NonIntegrable { beta: f64 },

    #[error("{0} on the closed negative real axis hits the principal branch cut")]
    BranchCut(String),

    #[error("domain is not contained in the required half-plane: {0}")]
    HalfPlaneViolation(String),

    #[error("normalization impossible: the unnormalized norm diverges (beta = {beta}, domain = {domain})")]
    NormalizationImpossible { beta: f64, domain: String },

    #[error("map is not a self-map of the domain (worst gauge violation {worst_violation:.3e})")]
    NotSelfMap { worst_violation: f64 },

    #[error("linear map is singular or not linear: {0}")]
    SingularLinearMap(String),

    #[error("basis size {size} exceeds the truncation guard {limit}")]
    DegreeOverflow { size: usize, limit: usize },

    #[error("polynomial text parse error at line {line}: {msg}")]
    PolyParse { line: usize, msg: String },

    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

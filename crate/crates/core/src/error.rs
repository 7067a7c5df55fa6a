//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the analytic kernels, the channel/RSMA model and the
/// Monte Carlo engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument left the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Equicorrelation outside (-1/(dim-1), 1].
    #[error("correlation {rho} is inadmissible for dimension {dim}: must lie in (-1/(dim-1), 1]")]
    InvalidCorrelation { rho: f64, dim: usize },

    /// A matrix expected to be positive semi-definite is not.
    #[error("matrix is not positive semi-definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveSemiDefinite { row: usize, pivot: f64 },

    /// Vector/matrix sizes do not agree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A port index fell outside the configured grid.
    #[error("port index out of range: {0}")]
    PortOutOfRange(String),

    /// Two port indices differ along a grid dimension with a single port,
    /// so the normalized separation is undefined.
    #[error("port indices differ along dimension {dim} which has a single port")]
    DegenerateDimension { dim: usize },

    /// A SINR threshold violates the power-split feasibility bounds; no
    /// amount of transmit power can satisfy it.
    #[error("infeasible configuration: {0}")]
    Infeasible(String),

    /// The operation supports fewer users than the scenario defines.
    #[error("{got} users are not supported here (maximum {max})")]
    UnsupportedUserCount { got: usize, max: usize },

    /// The physical-field sampler needs an integer Nakagami shape.
    #[error("shape m={0} must be a positive integer for the physical sampler; use the copula sampler instead")]
    NonIntegerShape(f64),

    /// A constructor received a value that violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;

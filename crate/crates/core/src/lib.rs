//! Outage analysis of a UAV decode-and-forward relay serving fluid-antenna
//! ground users under rate-splitting multiple access.
//!
//! The crate provides three routes to the same quantity and the machinery
//! to check them against each other:
//!
//! - [`rsma::outage_probability`] — the closed form: per-hop SINR threshold
//!   transforms, a Gamma backhaul marginal and a Student-t-copula best-port
//!   CDF on the user hop;
//! - [`rsma::outage_probability_asymptotic`] — the high-SNR power-law form;
//! - [`montecarlo::simulate_op`] — an independent stochastic oracle with
//!   deterministic counter-based substreams and exact-marginal samplers.
//!
//! Modules:
//!
//! - [`specfun`] — gamma/incomplete-gamma kernels, Student-t CDF/quantile,
//!   the equal-argument equicorrelated multivariate-t CDF (deterministic
//!   quadrature) and a randomized-QMC evaluator for general matrices;
//! - [`geometry`] — elevation angles, LoS probability, distances, path loss;
//! - [`channel`] — port grids, spatial correlation, Gamma and best-port
//!   gain CDFs;
//! - [`rsma`] — SINR model, feasibility, threshold transforms, outage;
//! - [`montecarlo`] — samplers and the outage simulator;
//! - [`linalg`] — the small dense-matrix helpers the above share.
//!
//! All public operations are pure functions of their inputs and are safe to
//! call concurrently.

// Validation guards are written as `!(x > 0.0)` so NaN is rejected along
// with the out-of-domain values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod montecarlo;
pub mod rsma;
pub mod specfun;

pub use channel::{CorrelationKernel, FadingParams, FasConfig, PortIndex};
pub use error::{Error, Result};
pub use geometry::{EnvParams, Position3};
pub use montecarlo::{McConfig, SamplerKind};
pub use rsma::{
    dbm_to_watts, watts_to_dbm, LinkBudget, OpEstimate, OpKind, OutageFactors, RsmaPower,
    RsmaScenario, Thresholds, UserConfig,
};
pub use specfun::{EquicorrMvt, QmcEstimate};

//! Special-function and multivariate-distribution kernels.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! any number of threads; the only shared state is the immutable quadrature
//! rule cache.

mod bessel;
mod gamma;
mod mvt;
mod normal;
pub mod quadrature;
mod qmc;
mod student_t;

pub use bessel::{bessel_j0, spherical_j0};
pub use gamma::{inv_reg_lower_inc_gamma, ln_gamma, reg_lower_inc_gamma, reg_upper_inc_gamma};
pub use mvt::{equicorr_mvt_cdf_common, equicorr_mvt_sf_common, EquicorrMvt};
pub use normal::{erf, erfc, norm_cdf, norm_pdf, norm_quantile, norm_sf};
pub use qmc::{mvt_cdf_qmc, QmcEstimate};
pub use student_t::{student_t_cdf, student_t_quantile, student_t_sf};

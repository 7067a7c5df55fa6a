//! Small-scale fading: per-link Gamma gain CDFs, the fluid-antenna port
//! correlation structure, the scalar copula dependence parameter, and the
//! closed-form best-port gain CDF with its high-SNR form.
//!
//! The best-port gain of an N-port grid is the maximum of N dependent
//! Gamma-distributed gains. Its CDF couples the Gamma marginal through a
//! Student-t copula:
//!
//!   F_fas(g) = T_{ν,Θ}( t_ν⁻¹(F_Γ(g)), …, t_ν⁻¹(F_Γ(g)) )
//!
//! with the equal-argument multivariate-t CDF from [`crate::specfun`].

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::specfun::{
    bessel_j0, equicorr_mvt_cdf_common, equicorr_mvt_sf_common, inv_reg_lower_inc_gamma,
    ln_gamma, reg_lower_inc_gamma, reg_upper_inc_gamma, spherical_j0, student_t_quantile,
    EquicorrMvt,
};

/// Nakagami fading expressed on the gain: shape `m` and spread `omega`
/// (the mean of the Gamma-distributed channel gain).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    pub m: f64,
    pub omega: f64,
}

impl FadingParams {
    pub fn new(m: f64, omega: f64) -> Result<Self> {
        if !(m >= 0.5) || !m.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Nakagami shape must satisfy m >= 0.5, got {m}"
            )));
        }
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "spread must be positive, got {omega}"
            )));
        }
        Ok(Self { m, omega })
    }
}

/// Spatial correlation kernel for the port grid. `BesselJ0` is the 2-D
/// rich-scattering kernel and the default; `Sinc` (spherical j₀) models 3-D
/// isotropic scattering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CorrelationKernel {
    #[default]
    BesselJ0,
    Sinc,
}

impl CorrelationKernel {
    fn eval(&self, arg: f64) -> f64 {
        match self {
            CorrelationKernel::BesselJ0 => bessel_j0(arg),
            CorrelationKernel::Sinc => spherical_j0(arg),
        }
    }
}

/// Fluid-antenna grid of one user: `n1 × n2` ports spread over an aperture
/// of `w1 × w2` squared wavelengths, plus the copula parameters (degrees of
/// freedom, optional explicit dependence parameter, kernel choice).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FasConfig {
    pub n1: usize,
    pub n2: usize,
    pub w1: f64,
    pub w2: f64,
    pub dof: f64,
    pub theta_override: Option<f64>,
    pub kernel: CorrelationKernel,
}

impl FasConfig {
    pub fn new(n1: usize, n2: usize, w1: f64, w2: f64, dof: f64) -> Result<Self> {
        let cfg = Self {
            n1,
            n2,
            w1,
            w2,
            dof,
            theta_override: None,
            kernel: CorrelationKernel::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_theta_override(mut self, theta: f64) -> Self {
        self.theta_override = Some(theta);
        self
    }

    pub fn with_kernel(mut self, kernel: CorrelationKernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidParameter(
                "port counts must be at least 1 per dimension".into(),
            ));
        }
        if !(self.w1 > 0.0 && self.w2 > 0.0) {
            return Err(Error::InvalidParameter(
                "aperture lengths must be positive".into(),
            ));
        }
        if !(self.dof > 0.0) || !self.dof.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "copula degrees of freedom must be positive, got {}",
                self.dof
            )));
        }
        if let Some(t) = self.theta_override {
            let n = self.ports() as f64;
            if !t.is_finite() || t > 1.0 || (n > 1.0 && t <= -1.0 / (n - 1.0)) {
                return Err(Error::InvalidCorrelation {
                    rho: t,
                    dim: self.ports(),
                });
            }
        }
        Ok(())
    }

    /// Total number of ports N = n1 · n2.
    pub fn ports(&self) -> usize {
        self.n1 * self.n2
    }
}

/// 2-D port index, 1-based along both grid dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortIndex {
    pub i1: usize,
    pub i2: usize,
}

/// Maps a 1-D port number `n in [1, N]` onto the grid (row-major:
/// `n = (i1-1)·n2 + i2`).
pub fn port_index_to_2d(n: usize, cfg: &FasConfig) -> Result<PortIndex> {
    if n < 1 || n > cfg.ports() {
        return Err(Error::PortOutOfRange(format!(
            "n={n} outside [1, {}]",
            cfg.ports()
        )));
    }
    Ok(PortIndex {
        i1: (n - 1) / cfg.n2 + 1,
        i2: (n - 1) % cfg.n2 + 1,
    })
}

/// Inverse of [`port_index_to_2d`].
pub fn port_index_to_1d(p: PortIndex, cfg: &FasConfig) -> Result<usize> {
    if p.i1 < 1 || p.i1 > cfg.n1 || p.i2 < 1 || p.i2 > cfg.n2 {
        return Err(Error::PortOutOfRange(format!(
            "({}, {}) outside [1,{}]x[1,{}]",
            p.i1, p.i2, cfg.n1, cfg.n2
        )));
    }
    Ok((p.i1 - 1) * cfg.n2 + p.i2)
}

/// Field correlation between two ports: the kernel evaluated at 2π times
/// the normalized port separation in wavelengths,
/// `2π √( (Δi1/(n1-1) · w1)² + (Δi2/(n2-1) · w2)² )`.
pub fn port_correlation(p: PortIndex, q: PortIndex, cfg: &FasConfig) -> Result<f64> {
    let arg = separation_arg(p, q, cfg)?;
    Ok(cfg.kernel.eval(arg))
}

fn separation_arg(p: PortIndex, q: PortIndex, cfg: &FasConfig) -> Result<f64> {
    let d1 = normalized_offset(p.i1, q.i1, cfg.n1, cfg.w1, 1)?;
    let d2 = normalized_offset(p.i2, q.i2, cfg.n2, cfg.w2, 2)?;
    Ok(2.0 * std::f64::consts::PI * (d1 * d1 + d2 * d2).sqrt())
}

fn normalized_offset(a: usize, b: usize, n: usize, w: f64, dim: usize) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if n <= 1 {
        return Err(Error::DegenerateDimension { dim });
    }
    Ok((a as f64 - b as f64) / (n as f64 - 1.0) * w)
}

/// Pairwise port correlation matrix, symmetric with unit diagonal.
///
/// Oscillating kernels can leave the matrix slightly indefinite at large
/// grids; eigenvalues below -1e-12 trigger a diagonal shift followed by
/// renormalization back to unit diagonal, which always yields a PSD matrix.
pub fn correlation_matrix(cfg: &FasConfig) -> Result<Matrix> {
    cfg.validate()?;
    let n = cfg.ports();
    let mut m = Matrix::identity(n);
    for i in 1..=n {
        let pi = port_index_to_2d(i, cfg)?;
        for j in (i + 1)..=n {
            let pj = port_index_to_2d(j, cfg)?;
            let c = port_correlation(pi, pj, cfg)?;
            m[(i - 1, j - 1)] = c;
            m[(j - 1, i - 1)] = c;
        }
    }
    Ok(regularize_to_psd(m))
}

fn regularize_to_psd(m: Matrix) -> Matrix {
    let lambda_min = m.min_eigenvalue();
    if lambda_min >= -1e-12 {
        return m;
    }
    let n = m.dim();
    let delta = -lambda_min + 1e-12;
    let scale = 1.0 + delta;
    let mut out = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[(i, j)] = m[(i, j)] / scale;
            }
        }
    }
    out
}

/// Scalar dependence parameter Θ for the gain copula of one port grid.
///
/// An explicit `theta_override` wins. Otherwise the matrix is reduced to the
/// mean of its **squared** off-diagonal entries: the copula couples channel
/// gains, and for complex Gaussian fields the squared-envelope correlation
/// is the square of the field correlation. (A signed mean would map small
/// apertures, whose field correlations sit in the first negative kernel
/// lobe, to anti-correlated gains and invert the aperture trend.) The result
/// is clamped into the admissible range (-1/(N-1), 1]; a single-port grid
/// returns 1 by convention, unused downstream.
pub fn effective_theta(cfg: &FasConfig) -> Result<f64> {
    cfg.validate()?;
    let n = cfg.ports();
    if let Some(t) = cfg.theta_override {
        return Ok(clamp_theta(t, n));
    }
    if n == 1 {
        return Ok(1.0);
    }
    let m = correlation_matrix(cfg)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += m[(i, j)] * m[(i, j)];
            count += 1;
        }
    }
    Ok(clamp_theta(sum / count as f64, n))
}

fn clamp_theta(t: f64, n: usize) -> f64 {
    if n <= 1 {
        return t.min(1.0);
    }
    let floor = -1.0 / (n as f64 - 1.0) + 1e-9;
    t.clamp(floor, 1.0)
}

// -- Gain distributions -----------------------------------------------------

/// CDF of a single-port channel gain: `P(m, m g / Ω)`.
pub fn gamma_gain_cdf(g: f64, f: &FadingParams) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::Domain(format!("gain must be nonnegative, got {g}")));
    }
    reg_lower_inc_gamma(f.m, f.m * g / f.omega)
}

/// Survival function of the single-port gain, `Q(m, m g / Ω)`, relatively
/// accurate arbitrarily deep in the tail.
pub fn gamma_gain_sf(g: f64, f: &FadingParams) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::Domain(format!("gain must be nonnegative, got {g}")));
    }
    reg_upper_inc_gamma(f.m, f.m * g / f.omega)
}

/// Leading small-argument expansion of the gain CDF,
/// `(m g / Ω)^m / (m Γ(m))`. Not clamped: it is an asymptote, not a
/// probability.
pub fn gamma_gain_cdf_asymptotic(g: f64, f: &FadingParams) -> f64 {
    debug_assert!(g >= 0.0);
    if g == 0.0 {
        return 0.0;
    }
    let ln_v = f.m * (f.m * g / f.omega).ln()
        - f.m.ln()
        - ln_gamma(f.m).expect("validated shape");
    ln_v.exp()
}

/// Quantile of the single-port gain: `g` with `F_Γ(g) = p`.
pub fn gamma_gain_quantile(p: f64, f: &FadingParams) -> Result<f64> {
    Ok(inv_reg_lower_inc_gamma(f.m, p)? * f.omega / f.m)
}

fn copula_spec(cfg: &FasConfig) -> Result<EquicorrMvt> {
    EquicorrMvt::new(cfg.ports(), cfg.dof, effective_theta(cfg)?)
}

/// Best-port gain CDF: the Gamma marginal pushed through the Student-t
/// copula with the grid's dependence parameter.
pub fn fas_gain_cdf(g: f64, f: &FadingParams, cfg: &FasConfig) -> Result<f64> {
    let u = gamma_gain_cdf(g, f)?;
    if u <= 0.0 {
        return Ok(0.0);
    }
    if u >= 1.0 {
        return Ok(1.0);
    }
    let spec = copula_spec(cfg)?;
    let x = student_t_quantile(u, cfg.dof)?;
    equicorr_mvt_cdf_common(x, &spec)
}

/// Best-port gain survival function `P(g_fas > g)`, with the tail carried
/// through in relative precision.
///
/// The quadrature loses relative accuracy once the joint tail drops below
/// its absolute error, so the result is clamped into the analytic envelope
/// `[Q_Γ(g), N·Q_Γ(g)]` (one port exceeding is necessary; the union bound
/// caps it).
pub fn fas_gain_sf(g: f64, f: &FadingParams, cfg: &FasConfig) -> Result<f64> {
    let uc = gamma_gain_sf(g, f)?;
    if uc >= 1.0 {
        return Ok(1.0);
    }
    if uc <= 0.0 {
        return Ok(0.0);
    }
    let spec = copula_spec(cfg)?;
    // Antisymmetry keeps the threshold accurate when the tail is tiny.
    let x = if uc < 0.5 {
        -student_t_quantile(uc, cfg.dof)?
    } else {
        student_t_quantile(1.0 - uc, cfg.dof)?
    };
    let sf = equicorr_mvt_sf_common(x, &spec)?;
    let lo = uc;
    let hi = (cfg.ports() as f64 * uc).min(1.0);
    Ok(sf.clamp(lo, hi))
}

/// High-SNR form of [`fas_gain_cdf`]: the marginal is replaced by its
/// leading power-law term (clamped into [0, 1] before the quantile
/// transform).
pub fn fas_gain_cdf_asymptotic(g: f64, f: &FadingParams, cfg: &FasConfig) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::Domain(format!("gain must be nonnegative, got {g}")));
    }
    let u = gamma_gain_cdf_asymptotic(g, f).clamp(0.0, 1.0);
    if u <= 0.0 {
        return Ok(0.0);
    }
    if u >= 1.0 {
        return Ok(1.0);
    }
    let spec = copula_spec(cfg)?;
    let x = student_t_quantile(u, cfg.dof)?;
    equicorr_mvt_cdf_common(x, &spec)
}

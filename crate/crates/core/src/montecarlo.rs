//! Independent stochastic oracle for the analysis: correlated port-gain
//! samplers, per-trial SINR realizations and outage estimation with
//! confidence intervals.
//!
//! Random-number discipline: every trial derives its own ChaCha substream
//! from `(seed, trial_index)`, so the partition of trials into chunks and
//! the number of worker threads cannot change a single draw. Outage
//! accumulation is integer counting, which is exact and order-independent;
//! identical `(seed, trials, chunk_size)` therefore give bit-identical
//! counts on any thread count.
//!
//! Two samplers are provided. The copula sampler draws the exact model the
//! closed form integrates (equicorrelated multivariate t pushed through the
//! Gamma marginal), so it is the ground truth for validating the analytic
//! CDF evaluation. The physical sampler sums correlated complex Gaussian
//! fields, whose gains carry the full kernel-structured (not equicorrelated)
//! dependence; it is the ground truth for judging the scalar-dependence
//! approximation itself, and the gap between the two is reported, not
//! hidden.

use crate::channel::{correlation_matrix, gamma_gain_quantile, FadingParams, FasConfig};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rsma::{
    sinr_relay_common, sinr_relay_private, sinr_user_common, sinr_user_private, OpEstimate,
    RsmaScenario,
};
use crate::specfun::student_t_cdf;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;

/// Which port-gain sampler the engine draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplerKind {
    #[default]
    Copula,
    Physical,
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub sampler: SamplerKind,
    /// Deterministic partition unit for parallel evaluation; affects only
    /// scheduling, never the draws.
    pub chunk_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            trials: 1_000_000,
            seed: 7,
            sampler: SamplerKind::Copula,
            chunk_size: 1 << 14,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.chunk_size == 0 {
            return Err(Error::InvalidParameter(
                "trials and chunk_size must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

// -- Deterministic substreams and primitive samplers --------------------------

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based substream: the ChaCha key is derived from
/// `(seed, trial_index)` alone.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut state = seed ^ trial.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Uniform draw in [0, 1) with 53 random bits.
pub(crate) fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal via the Marsaglia polar method.
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u = 2.0 * uniform(rng) - 1.0;
        let v = 2.0 * uniform(rng) - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Gamma(shape, scale) via Marsaglia–Tsang squeeze, with the boost trick
/// for shape < 1.
pub(crate) fn sample_gamma(shape: f64, scale: f64, rng: &mut ChaCha8Rng) -> f64 {
    debug_assert!(shape > 0.0 && scale > 0.0);
    if shape < 1.0 {
        let g = sample_gamma(shape + 1.0, scale, rng);
        let u = uniform(rng).max(1e-300);
        return g * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = uniform(rng).max(1e-300);
        if u < 1.0 - 0.0331 * x * x * x * x {
            return d * v * scale;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v * scale;
        }
    }
}

fn sample_chi_square(dof: f64, rng: &mut ChaCha8Rng) -> f64 {
    sample_gamma(dof / 2.0, 2.0, rng)
}

// -- Copula sampler ------------------------------------------------------------

/// Draws port-gain vectors from the equicorrelated t-copula with exact
/// Gamma marginals.
#[derive(Debug, Clone)]
pub struct CopulaSampler {
    marginal: FadingParams,
    dof: f64,
    theta: f64,
    ports: usize,
    /// Cholesky factor of the equicorrelated matrix; only needed when the
    /// dependence parameter is negative and the one-factor form breaks down.
    chol: Option<Matrix>,
}

impl CopulaSampler {
    pub fn new(f: &FadingParams, cfg: &FasConfig) -> Result<Self> {
        cfg.validate()?;
        let theta = crate::channel::effective_theta(cfg)?;
        let ports = cfg.ports();
        let chol = if theta < 0.0 && ports > 1 {
            Some(Matrix::equicorrelated(ports, theta).cholesky_lower()?)
        } else {
            None
        };
        Ok(Self {
            marginal: *f,
            dof: cfg.dof,
            theta,
            ports,
            chol,
        })
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    /// One draw of all port gains.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut gains = Vec::with_capacity(self.ports);
        self.sample_into(rng, &mut gains);
        gains
    }

    /// Draw into a reusable buffer. Draw order is fixed: the correlated
    /// normals first, the chi-square mixing variable last.
    pub fn sample_into(&self, rng: &mut ChaCha8Rng, gains: &mut Vec<f64>) {
        gains.clear();
        if self.ports == 1 {
            // Marginal only: exact Gamma draw through the copula pipeline
            // would be wasteful; a direct t draw keeps the code path shared.
            let z = standard_normal(rng);
            let s = sample_chi_square(self.dof, rng);
            gains.push(self.gain_from_t(z * (self.dof / s).sqrt()));
            return;
        }
        match &self.chol {
            None => {
                // One shared factor plus independent residuals.
                let st = self.theta.sqrt();
                let sr = (1.0 - self.theta).sqrt();
                let z0 = standard_normal(rng);
                for _ in 0..self.ports {
                    let eps = standard_normal(rng);
                    gains.push(st * z0 + sr * eps);
                }
                let s = sample_chi_square(self.dof, rng);
                let r = (self.dof / s).sqrt();
                for g in gains.iter_mut() {
                    *g = self.gain_from_t(*g * r);
                }
            }
            Some(l) => {
                let eps: Vec<f64> = (0..self.ports).map(|_| standard_normal(rng)).collect();
                for i in 0..self.ports {
                    let mut z = 0.0;
                    for (j, e) in eps.iter().enumerate().take(i + 1) {
                        z += l[(i, j)] * e;
                    }
                    gains.push(z);
                }
                let s = sample_chi_square(self.dof, rng);
                let r = (self.dof / s).sqrt();
                for g in gains.iter_mut() {
                    *g = self.gain_from_t(*g * r);
                }
            }
        }
    }

    fn gain_from_t(&self, t: f64) -> f64 {
        let u = student_t_cdf(t, self.dof)
            .expect("finite t and validated dof")
            // Events below a ulp of the boundary cannot be realized in any
            // feasible trial budget; clamping keeps the quantile finite.
            .clamp(1e-300, 1.0 - 1e-16);
        gamma_gain_quantile(u, &self.marginal).expect("u is interior")
    }
}

/// Convenience wrapper building the sampler per call.
pub fn sample_copula_gains(
    rng: &mut ChaCha8Rng,
    f: &FadingParams,
    cfg: &FasConfig,
) -> Result<Vec<f64>> {
    Ok(CopulaSampler::new(f, cfg)?.sample(rng))
}

// -- Physical sampler ------------------------------------------------------------

/// Draws port gains by summing `m` independent correlated complex Gaussian
/// field realizations whose per-port covariance is the full kernel-structured
/// correlation matrix. Marginals are Gamma(m, Ω/m); the cross-port gain
/// dependence is the squared field correlation, not an equicorrelation.
#[derive(Debug, Clone)]
pub struct PhysicalSampler {
    amp: Matrix,
    ports: usize,
    m: u64,
    per_component: f64,
}

impl PhysicalSampler {
    pub fn new(f: &FadingParams, cfg: &FasConfig) -> Result<Self> {
        cfg.validate()?;
        if f.m.fract() != 0.0 || f.m < 1.0 {
            return Err(Error::NonIntegerShape(f.m));
        }
        let corr = correlation_matrix(cfg)?;
        let n = corr.dim();
        let (lambda, v) = corr.sym_eigen();
        let mut amp = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                amp[(i, k)] = v[(i, k)] * lambda[k].max(0.0).sqrt();
            }
        }
        Ok(Self {
            amp,
            ports: n,
            m: f.m as u64,
            per_component: f.omega / (2.0 * f.m),
        })
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut gains = Vec::with_capacity(self.ports);
        self.sample_into(rng, &mut gains);
        gains
    }

    pub fn sample_into(&self, rng: &mut ChaCha8Rng, gains: &mut Vec<f64>) {
        gains.clear();
        gains.resize(self.ports, 0.0);
        let n = self.ports;
        let mut w = vec![0.0; n];
        let mut field = vec![0.0; n];
        // Two quadrature components per complex field draw.
        for _ in 0..2 * self.m {
            for slot in w.iter_mut() {
                *slot = standard_normal(rng);
            }
            for (i, out) in field.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (k, wk) in w.iter().enumerate() {
                    acc += self.amp[(i, k)] * wk;
                }
                *out = acc;
            }
            for (g, f) in gains.iter_mut().zip(&field) {
                *g += f * f * self.per_component;
            }
        }
    }
}

/// Convenience wrapper building the sampler per call; errors on non-integer
/// shape, pointing the caller to the copula sampler.
pub fn sample_physical_gains(
    rng: &mut ChaCha8Rng,
    f: &FadingParams,
    cfg: &FasConfig,
) -> Result<Vec<f64>> {
    Ok(PhysicalSampler::new(f, cfg)?.sample(rng))
}

enum PortSampler {
    Copula(CopulaSampler),
    Physical(PhysicalSampler),
}

impl PortSampler {
    fn sample_into(&self, rng: &mut ChaCha8Rng, gains: &mut Vec<f64>) {
        match self {
            PortSampler::Copula(s) => s.sample_into(rng, gains),
            PortSampler::Physical(s) => s.sample_into(rng, gains),
        }
    }
}

// -- Outage simulation ------------------------------------------------------------

/// Raw outage count for user `k` (0-based): `(outages, trials)`.
///
/// Per trial: one Gamma backhaul gain, one port-gain vector, best-port
/// selection, the four SINR conditions; an outage is counted unless all
/// four clear their thresholds.
pub fn simulate_outage_counts(
    k: usize,
    scenario: &RsmaScenario,
    mc: &McConfig,
) -> Result<(u64, u64)> {
    mc.validate()?;
    scenario.validate()?;
    let user = scenario.user(k)?;
    let relay_lb = scenario.relay_link()?;
    let user_lb = scenario.user_link(k)?;
    let sampler = match mc.sampler {
        SamplerKind::Copula => PortSampler::Copula(CopulaSampler::new(&user.fading, &user.fas)?),
        SamplerKind::Physical => {
            PortSampler::Physical(PhysicalSampler::new(&user.fading, &user.fas)?)
        }
    };
    let relay_shape = scenario.uav_fading.m;
    let relay_scale = scenario.uav_fading.omega / scenario.uav_fading.m;
    let power = &scenario.power;
    let th = user.thresholds;

    let chunk_starts: Vec<u64> = (0..mc.trials).step_by(mc.chunk_size as usize).collect();
    let outages: u64 = chunk_starts
        .par_iter()
        .map(|&start| {
            let end = (start + mc.chunk_size).min(mc.trials);
            let mut gains = Vec::new();
            let mut count = 0u64;
            for trial in start..end {
                let mut rng = trial_rng(mc.seed, trial);
                let g_relay = sample_gamma(relay_shape, relay_scale, &mut rng);
                sampler.sample_into(&mut rng, &mut gains);
                let g_fas = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let ok = sinr_relay_common(g_relay, &relay_lb, power) > th.common
                    && sinr_relay_private(k, g_relay, &relay_lb, power) > th.private
                    && sinr_user_common(g_fas, &user_lb, power) > th.common
                    && sinr_user_private(k, g_fas, &user_lb, power) > th.private;
                if !ok {
                    count += 1;
                }
            }
            count
        })
        .sum();
    Ok((outages, mc.trials))
}

/// Monte Carlo outage estimate with its binomial standard error.
pub fn simulate_op(k: usize, scenario: &RsmaScenario, mc: &McConfig) -> Result<OpEstimate> {
    let (outages, trials) = simulate_outage_counts(k, scenario, mc)?;
    let p = outages as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Ok(OpEstimate::monte_carlo(p, se))
}

// -- Superposition-coding (NOMA) baseline ---------------------------------------

/// Stream tag decorrelating the baseline runs from the rate-splitting runs
/// at equal seeds.
const NOMA_STREAM_TAG: u64 = 0x4E4F_4D41;

/// Monte Carlo outage of the decode-and-forward superposition-coding
/// baseline for user `k`. Reconstructed comparison, two users at most:
///
/// * power factors come from `scenario.noma_factors` (defaults mirror the
///   private split, 0.75/0.25);
/// * decoding order is descending power factor, so the far user's signal is
///   decoded first everywhere;
/// * the far user decodes only its own signal, treating the near user as
///   noise; the near user cancels the far signal first, then decodes its
///   own; the relay runs the same chain up to the requested user's signal;
/// * each signal's SINR target is the rate-equivalent combination of the
///   user's two stream thresholds, `(1+γ_c)(1+γ_p) - 1`, so both schemes
///   deliver the same per-user spectral efficiency;
/// * outage is any failed decode on either hop.
pub fn noma_outage_mc(
    k: usize,
    scenario: &RsmaScenario,
    trials: u64,
    seed: u64,
) -> Result<OpEstimate> {
    scenario.validate()?;
    if scenario.num_users() > 2 {
        return Err(Error::UnsupportedUserCount {
            got: scenario.num_users(),
            max: 2,
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let user = scenario.user(k)?;

    // Decode order: descending power factor.
    let mut order: Vec<usize> = (0..scenario.num_users()).collect();
    order.sort_by(|&a, &b| {
        scenario.noma_factors[b]
            .partial_cmp(&scenario.noma_factors[a])
            .expect("validated factors")
    });
    let pos = order
        .iter()
        .position(|&j| j == k)
        .expect("user is in the order");
    let chain = &order[..=pos];

    // Rate-equivalent per-signal SINR targets and their feasibility.
    let targets: Vec<f64> = scenario
        .users
        .iter()
        .map(|u| (1.0 + u.thresholds.common) * (1.0 + u.thresholds.private) - 1.0)
        .collect();
    for (step, &j) in chain.iter().enumerate() {
        let later: f64 = order[step + 1..].iter().map(|&l| scenario.noma_factors[l]).sum();
        if scenario.noma_factors[j] <= targets[j] * later {
            return Err(Error::Infeasible(format!(
                "superposition factor {} of user {} cannot reach target {} against residual power {later}",
                scenario.noma_factors[j],
                j + 1,
                targets[j]
            )));
        }
    }

    let relay_lb = scenario.relay_link()?;
    let user_lb = scenario.user_link(k)?;
    let sampler = CopulaSampler::new(&user.fading, &user.fas)?;
    let relay_shape = scenario.uav_fading.m;
    let relay_scale = scenario.uav_fading.omega / scenario.uav_fading.m;

    let decode_chain = |g: f64, p: f64, l: f64, noise: f64| -> bool {
        for (step, &j) in chain.iter().enumerate() {
            let later: f64 = order[step + 1..]
                .iter()
                .map(|&l2| scenario.noma_factors[l2])
                .sum();
            let sinr = p * l * g * scenario.noma_factors[j] / (p * l * g * later + noise);
            if sinr <= targets[j] {
                return false;
            }
        }
        true
    };

    let chunk = 1u64 << 14;
    let starts: Vec<u64> = (0..trials).step_by(chunk as usize).collect();
    let outages: u64 = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(trials);
            let mut gains = Vec::new();
            let mut count = 0u64;
            for trial in start..end {
                let mut rng = trial_rng(seed ^ NOMA_STREAM_TAG, trial);
                let g_relay = sample_gamma(relay_shape, relay_scale, &mut rng);
                sampler.sample_into(&mut rng, &mut gains);
                let g_fas = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let ok = decode_chain(
                    g_relay,
                    scenario.p_b,
                    relay_lb.path_loss,
                    relay_lb.noise_power,
                ) && decode_chain(
                    g_fas,
                    scenario.p_a,
                    user_lb.path_loss,
                    user_lb.noise_power,
                );
                if !ok {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let p = outages as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Ok(OpEstimate::monte_carlo(p, se))
}

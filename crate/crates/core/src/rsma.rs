//! Rate-splitting SINR model, threshold transforms, feasibility checks and
//! the two-hop outage probability.
//!
//! The downlink splits each user's message into a common stream (power
//! factor α_c, decoded by everyone first) and private streams (α_{p,k},
//! decoded after the common stream is cancelled). A half-duplex
//! decode-and-forward relay carries both hops, so the outage event for user
//! k is the union of decode failures of its two streams at the relay and at
//! the user. Each SINR condition inverts to a threshold on the hop's channel
//! gain; the per-hop maxima ζ̂ (relay) and ζ̃ (user) factor the success
//! probability into two independent survival terms:
//!
//!   1 - OP_k = P(g_relay > ζ̂) · P(g_fas,k > ζ̃).
//!
//! Both survivals are computed tail-accurately, so the product stays
//! strictly monotone in transmit power even where the OP itself saturates
//! to 1 in double precision.

use crate::channel::{
    fas_gain_cdf, fas_gain_cdf_asymptotic, fas_gain_sf, gamma_gain_cdf,
    gamma_gain_cdf_asymptotic, gamma_gain_sf, FadingParams, FasConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{path_loss, EnvParams, Position3};

/// Converts a dBm figure to linear watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Converts linear watts to dBm.
pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

/// Power split of the rate-splitting transmitter: a common factor and one
/// private factor per user, all strictly positive and summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct RsmaPower {
    pub alpha_c: f64,
    pub alpha_p: Vec<f64>,
}

impl RsmaPower {
    pub fn new(alpha_c: f64, alpha_p: Vec<f64>) -> Result<Self> {
        let p = Self { alpha_c, alpha_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha_c > 0.0 && self.alpha_c < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "power split violated: alpha_c={} must lie in (0,1)",
                self.alpha_c
            )));
        }
        if self.alpha_p.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one private power factor is required".into(),
            ));
        }
        for (k, a) in self.alpha_p.iter().enumerate() {
            if !(*a > 0.0 && *a < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "power split violated: alpha_p[{k}]={a} must lie in (0,1)"
                )));
            }
        }
        let total = self.alpha_c + self.alpha_p.iter().sum::<f64>();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "power split violated: alpha_c + sum(alpha_p) = {total}, must be 1"
            )));
        }
        Ok(())
    }

    pub fn sum_private(&self) -> f64 {
        self.alpha_p.iter().sum()
    }

    pub fn sum_private_except(&self, k: usize) -> f64 {
        self.alpha_p
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, a)| a)
            .sum()
    }
}

/// Everything one hop needs for a SINR evaluation. `interference_power`
/// multiplies the intra-stream interference term; it equals `tx_power`
/// except in the literal second-hop variant (audit mode).
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    pub tx_power: f64,
    pub interference_power: f64,
    pub path_loss: f64,
    pub noise_power: f64,
    pub fading: FadingParams,
    pub fas: Option<FasConfig>,
}

/// Per-user SINR thresholds for the common and private messages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub common: f64,
    pub private: f64,
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.common > 0.0 && self.private > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "SINR thresholds must be positive, got common={}, private={}",
                self.common, self.private
            )));
        }
        Ok(())
    }
}

/// One ground user: position, its fading and fluid-antenna configuration,
/// receiver noise power (watts) and SINR thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct UserConfig {
    pub position: Position3,
    pub fading: FadingParams,
    pub fas: FasConfig,
    pub noise_power: f64,
    pub thresholds: Thresholds,
}

/// Complete scenario: node geometry, environment, power budget, fading on
/// both hops and the per-user configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct RsmaScenario {
    pub bs: Position3,
    pub uav: Position3,
    pub users: Vec<UserConfig>,
    pub env: EnvParams,
    pub power: RsmaPower,
    /// Base-station transmit power, watts.
    pub p_b: f64,
    /// Relay transmit power, watts.
    pub p_a: f64,
    /// Fading of the BS→relay link.
    pub uav_fading: FadingParams,
    /// Receiver noise power at the relay, watts.
    pub uav_noise: f64,
    /// Power factors of the superposition-coding baseline, one per user.
    pub noma_factors: Vec<f64>,
    /// Evaluate the second hop with the literal source-model constants
    /// (BS power in the common-stream interference term, relay noise and BS
    /// power in the private threshold transform) instead of the symmetric
    /// relay-powered form. Audit switch; default off.
    pub literal_second_hop: bool,
}

impl RsmaScenario {
    /// Reference two-user scenario: relay hovering at (10,10,100) m, users
    /// at (200,200,0) and (180,180,0) m, α_c = 0.6 with a 0.75/0.25 private
    /// split, N = 2×2 ports over 1λ², m = 4 on the backhaul and 2 on the
    /// user links, ν = 25, −70 dBm noise, 5 dBm on both transmitters and
    /// 0.1 SINR thresholds.
    pub fn default_two_user() -> Self {
        let fas = FasConfig::new(2, 2, 1.0, 1.0, 25.0).expect("reference grid is valid");
        let user_fading = FadingParams::new(2.0, 1.0).expect("reference fading is valid");
        let noise = dbm_to_watts(-70.0);
        let thresholds = Thresholds {
            common: 0.1,
            private: 0.1,
        };
        let user = |x: f64, y: f64| UserConfig {
            position: Position3::new(x, y, 0.0),
            fading: user_fading,
            fas,
            noise_power: noise,
            thresholds,
        };
        Self {
            bs: Position3::new(0.0, 0.0, 0.0),
            uav: Position3::new(10.0, 10.0, 100.0),
            users: vec![user(200.0, 200.0), user(180.0, 180.0)],
            env: EnvParams {
                mu1: 5.0188,
                mu2: 0.3511,
                eta_los: 4.65e-5,
                eta_nlos: 4.65e-5,
                beta: 2.0,
            },
            power: RsmaPower {
                alpha_c: 0.6,
                alpha_p: vec![0.3, 0.1],
            },
            p_b: dbm_to_watts(5.0),
            p_a: dbm_to_watts(5.0),
            uav_fading: FadingParams::new(4.0, 1.0).expect("reference fading is valid"),
            uav_noise: noise,
            noma_factors: vec![0.75, 0.25],
            literal_second_hop: false,
        }
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.users.is_empty() {
            return Err(Error::InvalidParameter("at least one user required".into()));
        }
        if !self.bs.is_finite() || !self.uav.is_finite() {
            return Err(Error::InvalidParameter(
                "node positions must be finite".into(),
            ));
        }
        self.env.validate()?;
        self.power.validate()?;
        if self.power.alpha_p.len() != self.users.len() {
            return Err(Error::DimensionMismatch {
                expected: self.users.len(),
                got: self.power.alpha_p.len(),
            });
        }
        if !(self.p_b > 0.0 && self.p_a > 0.0 && self.uav_noise > 0.0) {
            return Err(Error::InvalidParameter(
                "powers and noise must be positive".into(),
            ));
        }
        for (k, u) in self.users.iter().enumerate() {
            if !u.position.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "user {k} position must be finite"
                )));
            }
            if !(u.noise_power > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "user {k} noise power must be positive"
                )));
            }
            u.thresholds.validate()?;
            u.fas.validate()?;
            FadingParams::new(u.fading.m, u.fading.omega)?;
        }
        FadingParams::new(self.uav_fading.m, self.uav_fading.omega)?;
        if self.noma_factors.len() != self.users.len() {
            return Err(Error::DimensionMismatch {
                expected: self.users.len(),
                got: self.noma_factors.len(),
            });
        }
        let noma_sum: f64 = self.noma_factors.iter().sum();
        if self.noma_factors.iter().any(|a| !(*a > 0.0)) || (noma_sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "superposition power factors must be positive and sum to 1".into(),
            ));
        }
        Ok(())
    }

    /// Budget of the BS→relay hop.
    pub fn relay_link(&self) -> Result<LinkBudget> {
        Ok(LinkBudget {
            tx_power: self.p_b,
            interference_power: self.p_b,
            path_loss: path_loss(self.uav, self.bs, &self.env)?,
            noise_power: self.uav_noise,
            fading: self.uav_fading,
            fas: None,
        })
    }

    /// Budget of the relay→user hop for user `k` (0-based).
    pub fn user_link(&self, k: usize) -> Result<LinkBudget> {
        let user = self.user(k)?;
        Ok(LinkBudget {
            tx_power: self.p_a,
            interference_power: if self.literal_second_hop {
                self.p_b
            } else {
                self.p_a
            },
            path_loss: path_loss(self.uav, user.position, &self.env)?,
            noise_power: user.noise_power,
            fading: user.fading,
            fas: Some(user.fas),
        })
    }

    pub fn user(&self, k: usize) -> Result<&UserConfig> {
        self.users.get(k).ok_or(Error::InvalidParameter(format!(
            "user index {k} outside 0..{}",
            self.users.len()
        )))
    }

    /// Same scenario with a different common power factor; the private
    /// factors are rescaled proportionally so the split still sums to one.
    pub fn with_alpha_c(&self, alpha_c: f64) -> Result<Self> {
        if !(alpha_c > 0.0 && alpha_c < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha_c={alpha_c} must lie in (0,1)"
            )));
        }
        let old_private = self.power.sum_private();
        let mut next = self.clone();
        next.power.alpha_c = alpha_c;
        for a in &mut next.power.alpha_p {
            *a *= (1.0 - alpha_c) / old_private;
        }
        Ok(next)
    }

    /// Same scenario with both transmit powers set to `dbm`.
    pub fn with_power_dbm(&self, dbm: f64) -> Self {
        let mut next = self.clone();
        next.p_b = dbm_to_watts(dbm);
        next.p_a = dbm_to_watts(dbm);
        next
    }
}

// -- SINR expressions ---------------------------------------------------------

fn sinr_common_impl(g: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    let signal = lb.tx_power * lb.path_loss * g;
    let interference = lb.interference_power * lb.path_loss * g * power.sum_private();
    signal * power.alpha_c / (interference + lb.noise_power)
}

fn sinr_private_impl(k: usize, g: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    let signal = lb.tx_power * lb.path_loss * g * power.alpha_p[k];
    let interference = lb.tx_power * lb.path_loss * g * power.sum_private_except(k);
    signal / (interference + lb.noise_power)
}

/// SINR for decoding the common stream at the relay (private streams are
/// noise).
pub fn sinr_relay_common(g: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    sinr_common_impl(g, lb, power)
}

/// SINR for decoding user `k`'s private stream at the relay after the
/// common stream is cancelled.
pub fn sinr_relay_private(k: usize, g: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    sinr_private_impl(k, g, lb, power)
}

/// SINR for decoding the common stream at a user's best port.
pub fn sinr_user_common(g_fas: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    sinr_common_impl(g_fas, lb, power)
}

/// SINR for decoding user `k`'s private stream at its best port.
pub fn sinr_user_private(k: usize, g_fas: f64, lb: &LinkBudget, power: &RsmaPower) -> f64 {
    sinr_private_impl(k, g_fas, lb, power)
}

// -- Threshold transforms and feasibility --------------------------------------

/// Open upper bounds on the two SINR thresholds of user `k` implied by the
/// power split: the common threshold must stay below `α_c / Σ α_p` and the
/// private one below `α_{p,k} / Σ_{k̃≠k} α_{p,k̃}` (infinite for a single
/// user).
pub fn feasibility_bounds(power: &RsmaPower, k: usize) -> (f64, f64) {
    let max_common = power.alpha_c / power.sum_private();
    let others = power.sum_private_except(k);
    let max_private = if others > 0.0 {
        power.alpha_p[k] / others
    } else {
        f64::INFINITY
    };
    (max_common, max_private)
}

/// The four gain-threshold transforms of user `k`, before the per-hop max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdTransforms {
    pub relay_common: f64,
    pub relay_private: f64,
    pub user_common: f64,
    pub user_private: f64,
}

/// Inverts each SINR condition into a gain threshold. Errors with the
/// violated bound when the scenario is infeasible.
pub fn threshold_transforms(k: usize, scenario: &RsmaScenario) -> Result<ThresholdTransforms> {
    let user = scenario.user(k)?;
    let th = user.thresholds;
    let power = &scenario.power;
    let (max_common, max_private) = feasibility_bounds(power, k);
    if th.common >= max_common {
        return Err(Error::Infeasible(format!(
            "common threshold {} for user {} reaches its bound {max_common} (alpha_c / sum alpha_p)",
            th.common,
            k + 1
        )));
    }
    if th.private >= max_private {
        return Err(Error::Infeasible(format!(
            "private threshold {} for user {} reaches its bound {max_private}",
            th.private,
            k + 1
        )));
    }

    let denom_common = power.alpha_c - th.common * power.sum_private();
    let denom_private = power.alpha_p[k] - th.private * power.sum_private_except(k);
    let l_ab = path_loss(scenario.uav, scenario.bs, &scenario.env)?;
    let l_ak = path_loss(scenario.uav, user.position, &scenario.env)?;

    let relay_common = th.common * scenario.uav_noise / (scenario.p_b * l_ab * denom_common);
    let relay_private = th.private * scenario.uav_noise / (scenario.p_b * l_ab * denom_private);
    let user_common = th.common * user.noise_power / (scenario.p_a * l_ak * denom_common);
    let user_private = if scenario.literal_second_hop {
        th.private * scenario.uav_noise / (scenario.p_b * l_ak * denom_private)
    } else {
        th.private * user.noise_power / (scenario.p_a * l_ak * denom_private)
    };
    Ok(ThresholdTransforms {
        relay_common,
        relay_private,
        user_common,
        user_private,
    })
}

/// The per-hop gain thresholds `(ζ̂, ζ̃)`: the maxima of the transformed
/// common/private thresholds on the relay and user links.
pub fn effective_thresholds(k: usize, scenario: &RsmaScenario) -> Result<(f64, f64)> {
    let t = threshold_transforms(k, scenario)?;
    Ok((
        t.relay_common.max(t.relay_private),
        t.user_common.max(t.user_private),
    ))
}

// -- Outage probability ---------------------------------------------------------

/// How an outage value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    Exact,
    Asymptotic,
    MonteCarlo,
}

/// An outage-probability value with its provenance; the standard error is
/// present exactly for Monte Carlo estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpEstimate {
    pub value: f64,
    pub kind: OpKind,
    pub std_error: Option<f64>,
}

impl OpEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            kind: OpKind::Exact,
            std_error: None,
        }
    }

    pub fn asymptotic(value: f64) -> Self {
        Self {
            value,
            kind: OpKind::Asymptotic,
            std_error: None,
        }
    }

    pub fn monte_carlo(value: f64, std_error: f64) -> Self {
        Self {
            value,
            kind: OpKind::MonteCarlo,
            std_error: Some(std_error),
        }
    }
}

/// Both factors of the outage factorization, exposed so callers can work
/// with the survival product where the OP itself saturates in double
/// precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageFactors {
    pub zeta_relay: f64,
    pub zeta_user: f64,
    pub relay_cdf: f64,
    pub relay_survival: f64,
    pub user_cdf: f64,
    pub user_survival: f64,
}

impl OutageFactors {
    /// `P(no outage)`: the product of the two hop survivals.
    pub fn survival_product(&self) -> f64 {
        self.relay_survival * self.user_survival
    }

    /// The outage probability, defined as one minus the survival product.
    pub fn op_value(&self) -> f64 {
        (1.0 - self.survival_product()).clamp(0.0, 1.0)
    }
}

/// Evaluates both hop CDFs and survivals at the effective thresholds.
pub fn outage_factors(k: usize, scenario: &RsmaScenario) -> Result<OutageFactors> {
    let (zeta_relay, zeta_user) = effective_thresholds(k, scenario)?;
    let user = scenario.user(k)?;
    Ok(OutageFactors {
        zeta_relay,
        zeta_user,
        relay_cdf: gamma_gain_cdf(zeta_relay, &scenario.uav_fading)?,
        relay_survival: gamma_gain_sf(zeta_relay, &scenario.uav_fading)?,
        user_cdf: fas_gain_cdf(zeta_user, &user.fading, &user.fas)?,
        user_survival: fas_gain_sf(zeta_user, &user.fading, &user.fas)?,
    })
}

/// Closed-form outage probability of user `k` (0-based).
pub fn outage_probability(k: usize, scenario: &RsmaScenario) -> Result<OpEstimate> {
    Ok(OpEstimate::exact(outage_factors(k, scenario)?.op_value()))
}

/// High-SNR outage asymptote: the same factorization with each marginal
/// replaced by its leading power-law term.
pub fn outage_probability_asymptotic(k: usize, scenario: &RsmaScenario) -> Result<OpEstimate> {
    let (zeta_relay, zeta_user) = effective_thresholds(k, scenario)?;
    let user = scenario.user(k)?;
    let relay_cdf = gamma_gain_cdf_asymptotic(zeta_relay, &scenario.uav_fading).min(1.0);
    let user_cdf = fas_gain_cdf_asymptotic(zeta_user, &user.fading, &user.fas)?;
    let value = 1.0 - (1.0 - relay_cdf) * (1.0 - user_cdf);
    Ok(OpEstimate::asymptotic(value.clamp(0.0, 1.0)))
}

/// Monte Carlo outage of the superposition-coding (NOMA) baseline for user
/// `k`; see [`crate::montecarlo::noma_outage_mc`] for the construction.
pub fn noma_outage_mc(
    k: usize,
    scenario: &RsmaScenario,
    trials: u64,
    seed: u64,
) -> Result<OpEstimate> {
    crate::montecarlo::noma_outage_mc(k, scenario, trials, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario() -> RsmaScenario {
        RsmaScenario::default_two_user()
    }

    #[test]
    fn default_scenario_is_valid() {
        scenario().validate().unwrap();
    }

    #[test]
    fn unit_conversions() {
        assert!((dbm_to_watts(5.0) - 3.16227766e-3).abs() < 1e-11);
        assert!((dbm_to_watts(-70.0) - 1e-10).abs() < 1e-22);
        assert!((watts_to_dbm(dbm_to_watts(17.0)) - 17.0).abs() < 1e-12);
    }

    #[test]
    fn sinr_common_arithmetic() {
        let power = RsmaPower::new(0.6, vec![0.3, 0.1]).unwrap();
        let lb = LinkBudget {
            tx_power: 10.0,
            interference_power: 10.0,
            path_loss: 1.0,
            noise_power: 1.0,
            fading: FadingParams::new(2.0, 1.0).unwrap(),
            fas: None,
        };
        assert_eq!(sinr_relay_common(0.0, &lb, &power), 0.0);
        // P L g / σ² = 10: SINR = 6 / (4 + 1).
        let v = sinr_relay_common(1.0, &lb, &power);
        assert!((v - 1.2).abs() < 1e-14, "direct arithmetic: {v}");
        // Interference-limited ceiling α_c / Σ α_p = 1.5.
        let v = sinr_relay_common(1e12, &lb, &power);
        assert!((v - 1.5).abs() < 1e-9, "ceiling: {v}");
    }

    #[test]
    fn sinr_private_arithmetic() {
        let power = RsmaPower::new(0.6, vec![0.3, 0.1]).unwrap();
        let lb = LinkBudget {
            tx_power: 10.0,
            interference_power: 10.0,
            path_loss: 1.0,
            noise_power: 1.0,
            fading: FadingParams::new(2.0, 1.0).unwrap(),
            fas: None,
        };
        assert_eq!(sinr_relay_private(0, 0.0, &lb, &power), 0.0);
        // Ceiling for user 1: 0.3 / 0.1 = 3.
        let v = sinr_relay_private(0, 1e12, &lb, &power);
        assert!((v - 3.0).abs() < 1e-8, "user-1 ceiling: {v}");
        // Single user: no interference term, pure SNR.
        let single = RsmaPower::new(0.6, vec![0.4]).unwrap();
        let v = sinr_relay_private(0, 1.0, &lb, &single);
        assert!((v - 4.0).abs() < 1e-14, "K=1 SNR: {v}");
    }

    #[test]
    fn user_sinrs_mirror_relay_forms() {
        let s = scenario();
        let lb = s.user_link(0).unwrap();
        let power = &s.power;
        assert_eq!(sinr_user_common(0.0, &lb, power), 0.0);
        let v = sinr_user_common(1e14, &lb, power);
        assert!((v - 1.5).abs() < 1e-6, "user common ceiling: {v}");
        let v = sinr_user_private(0, 1e14, &lb, power);
        assert!((v - 3.0).abs() < 1e-5, "user private ceiling: {v}");
    }

    #[test]
    fn feasibility_bounds_reference_split() {
        let power = RsmaPower::new(0.6, vec![0.3, 0.1]).unwrap();
        let (c, p1) = feasibility_bounds(&power, 0);
        assert!((c - 1.5).abs() < 1e-15);
        assert!((p1 - 3.0).abs() < 1e-15);
        let (_, p2) = feasibility_bounds(&power, 1);
        assert!((p2 - 0.1 / 0.3).abs() < 1e-15);
        // Single user: empty interference sum, unbounded private threshold.
        let single = RsmaPower::new(0.6, vec![0.4]).unwrap();
        assert_eq!(feasibility_bounds(&single, 0).1, f64::INFINITY);
        // alpha_c -> 1 pushes the common bound to infinity.
        let top_heavy = RsmaPower::new(1.0 - 1e-9, vec![0.5e-9, 0.5e-9]).unwrap();
        assert!(feasibility_bounds(&top_heavy, 0).0 > 1e8);
    }

    #[test]
    fn threshold_transforms_match_stepwise_oracle() {
        // Recompose the four transforms from first principles.
        let s = scenario();
        let t = threshold_transforms(0, &s).unwrap();
        let l_ab = path_loss(s.uav, s.bs, &s.env).unwrap();
        let l_a1 = path_loss(s.uav, s.users[0].position, &s.env).unwrap();
        let gamma = 0.1;
        let denom_c = 0.6 - gamma * 0.4;
        let denom_p = 0.3 - gamma * 0.1;
        let sigma = 1e-10;
        let p = dbm_to_watts(5.0);
        assert!((t.relay_common - gamma * sigma / (p * l_ab * denom_c)).abs() < 1e-20);
        assert!((t.relay_private - gamma * sigma / (p * l_ab * denom_p)).abs() < 1e-20);
        assert!((t.user_common - gamma * sigma / (p * l_a1 * denom_c)).abs() < 1e-18);
        assert!((t.user_private - gamma * sigma / (p * l_a1 * denom_p)).abs() < 1e-18);
        let (zeta_relay, zeta_user) = effective_thresholds(0, &s).unwrap();
        assert_eq!(zeta_relay, t.relay_common.max(t.relay_private));
        assert_eq!(zeta_user, t.user_common.max(t.user_private));
    }

    #[test]
    fn thresholds_scale_linearly_in_noise() {
        let s = scenario();
        let mut doubled = s.clone();
        doubled.uav_noise *= 2.0;
        for u in &mut doubled.users {
            u.noise_power *= 2.0;
        }
        let (zr, zu) = effective_thresholds(1, &s).unwrap();
        let (zr2, zu2) = effective_thresholds(1, &doubled).unwrap();
        // Doubling is a power-of-two scaling, hence exact in binary.
        assert_eq!(zr2, 2.0 * zr);
        assert_eq!(zu2, 2.0 * zu);
    }

    #[test]
    fn boundary_threshold_is_infeasible() {
        let mut s = scenario();
        s.users[0].thresholds.common = 1.5; // exactly alpha_c / sum(alpha_p)
        assert!(matches!(
            effective_thresholds(0, &s),
            Err(Error::Infeasible(_))
        ));
        let mut s = scenario();
        s.users[1].thresholds.private = 0.1 / 0.3 + 1e-6;
        assert!(matches!(
            effective_thresholds(1, &s),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn literal_second_hop_changes_only_the_user_private_transform() {
        let mut s = scenario();
        let base = threshold_transforms(1, &s).unwrap();
        s.literal_second_hop = true;
        let lit = threshold_transforms(1, &s).unwrap();
        assert_eq!(base.relay_common, lit.relay_common);
        assert_eq!(base.relay_private, lit.relay_private);
        assert_eq!(base.user_common, lit.user_common);
        // Same noise and power values by default, so the literal variant
        // coincides numerically; scale them apart to observe the switch.
        let mut skewed = s.clone();
        skewed.p_b = 2.0 * skewed.p_a;
        let lit2 = threshold_transforms(1, &skewed).unwrap();
        let mut skewed_sym = skewed.clone();
        skewed_sym.literal_second_hop = false;
        let sym2 = threshold_transforms(1, &skewed_sym).unwrap();
        assert_eq!(lit2.user_private, sym2.user_private / 2.0);
    }

    #[test]
    fn outage_limits() {
        // Enormous power: thresholds collapse, OP -> 0.
        let s = scenario().with_power_dbm(80.0);
        let op = outage_probability(0, &s).unwrap();
        assert!(op.value < 1e-12, "high-power OP: {}", op.value);
        // Enormous noise: OP -> 1.
        let mut s = scenario();
        s.uav_noise = 1.0;
        for u in &mut s.users {
            u.noise_power = 1.0;
        }
        let op = outage_probability(0, &s).unwrap();
        assert!(op.value > 1.0 - 1e-12, "high-noise OP: {}", op.value);
    }

    #[test]
    fn factorization_identity_as_computed() {
        let s = scenario().with_power_dbm(20.0);
        for k in 0..2 {
            let f = outage_factors(k, &s).unwrap();
            let op = outage_probability(k, &s).unwrap();
            assert_eq!(op.value, f.op_value(), "OP must be built from the factors");
            assert_eq!(
                f.op_value(),
                (1.0 - f.relay_survival * f.user_survival).clamp(0.0, 1.0)
            );
            // CDF and survival of each hop complement each other.
            assert!((f.relay_cdf + f.relay_survival - 1.0).abs() < 1e-13);
            assert!((f.user_cdf + f.user_survival - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn survival_product_monotone_in_power() {
        let s = scenario();
        for k in 0..2 {
            let mut prev = -1.0;
            for dbm in [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0] {
                let f = outage_factors(k, &s.with_power_dbm(dbm)).unwrap();
                let sp = f.survival_product();
                assert!(
                    sp > prev,
                    "survival product not strictly increasing at {dbm} dBm, user {k}"
                );
                prev = sp;
            }
        }
    }

    #[test]
    fn op_monotone_in_individual_powers() {
        // Raising either transmit power can only help.
        let s = scenario().with_power_dbm(18.0);
        for k in 0..2 {
            let base = outage_factors(k, &s).unwrap().survival_product();
            let mut up_b = s.clone();
            up_b.p_b *= 2.0;
            let mut up_a = s.clone();
            up_a.p_a *= 2.0;
            assert!(outage_factors(k, &up_b).unwrap().survival_product() >= base);
            assert!(outage_factors(k, &up_a).unwrap().survival_product() >= base);
        }
    }

    #[test]
    fn op_monotone_in_ports_and_fading_shape() {
        // At 25 dBm the thresholds sit below the gain mean, where both
        // trends are strict.
        let s = scenario().with_power_dbm(25.0);
        let mut prev = f64::INFINITY;
        for (n1, n2) in [(1usize, 1usize), (1, 2), (2, 2)] {
            let mut sc = s.clone();
            for u in &mut sc.users {
                u.fas.n1 = n1;
                u.fas.n2 = n2;
            }
            let v = outage_probability(0, &sc).unwrap().value;
            assert!(v < prev, "OP not decreasing with ports at {n1}x{n2}: {v}");
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for m in [1.0, 2.0, 4.0] {
            let mut sc = s.clone();
            for u in &mut sc.users {
                u.fading = FadingParams::new(m, 1.0).unwrap();
            }
            let v = outage_probability(1, &sc).unwrap().value;
            assert!(v < prev, "OP not decreasing in m at m={m}: {v}");
            prev = v;
        }
    }

    #[test]
    fn asymptote_ratio_approaches_one() {
        let s = scenario();
        let mut prev_gap = f64::INFINITY;
        let mut checked = false;
        for dbm in [20.0, 25.0, 30.0, 35.0, 40.0] {
            let sc = s.with_power_dbm(dbm);
            let exact = outage_probability(0, &sc).unwrap().value;
            if exact > 1e-3 || exact == 0.0 {
                continue;
            }
            let asym = outage_probability_asymptotic(0, &sc).unwrap().value;
            let gap = (asym / exact - 1.0).abs();
            assert!(
                gap <= prev_gap + 1e-12,
                "asymptote gap grew at {dbm} dBm: {gap}"
            );
            prev_gap = gap;
            checked = true;
        }
        assert!(checked, "no grid point reached the small-OP regime");
        assert!(prev_gap < 0.1, "final asymptote gap: {prev_gap}");
    }

    #[test]
    fn asymptote_exact_closed_form_in_degenerate_case() {
        // m_b = 1, N = 1, K = 1: both asymptotic marginals are the raw
        // power laws ζ/Ω, so the asymptote is exactly
        // 1 - (1 - ζ̂)(1 - ζ̃).
        let mut s = scenario().with_power_dbm(30.0);
        s.users.truncate(1);
        s.power = RsmaPower::new(0.6, vec![0.4]).unwrap();
        s.noma_factors = vec![1.0];
        s.uav_fading = FadingParams::new(1.0, 1.0).unwrap();
        s.users[0].fading = FadingParams::new(1.0, 1.0).unwrap();
        s.users[0].fas = FasConfig::new(1, 1, 1.0, 1.0, 25.0).unwrap();
        let (zr, zu) = effective_thresholds(0, &s).unwrap();
        let want = 1.0 - (1.0 - zr) * (1.0 - zu);
        let got = outage_probability_asymptotic(0, &s).unwrap().value;
        assert!(
            (got - want).abs() < 1e-12,
            "degenerate asymptote: {got} vs {want}"
        );
    }

    #[test]
    fn alpha_c_sweep_has_interior_minimum() {
        let s = scenario().with_power_dbm(20.0);
        let mut values = Vec::new();
        let mut a = 0.12;
        while a <= 0.96 {
            if let Ok(sc) = s.with_alpha_c(a) {
                if let Ok(f) = outage_factors(0, &sc) {
                    values.push((a, f.survival_product()));
                }
            }
            a += 0.04;
        }
        assert!(values.len() > 5);
        // Survival peaks strictly inside the feasible range.
        let (best_idx, _) = values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
            .unwrap();
        assert!(
            best_idx > 0 && best_idx < values.len() - 1,
            "optimum sits at the edge: idx {best_idx} of {}",
            values.len()
        );
        assert!(values[best_idx].1 > values[0].1);
        assert!(values[best_idx].1 > values[values.len() - 1].1);
    }

    #[test]
    fn near_boundary_outage_saturates() {
        // 0.999x the common bound: feasible, but the transform explodes and
        // the OP pins to 1.
        let mut s = scenario();
        s.users[0].thresholds.common = 1.5 * 0.999;
        let op = outage_probability(0, &s).unwrap();
        assert!(op.value >= 0.999, "near-boundary OP: {}", op.value);
        // 1.001x: over the bound, infeasible.
        s.users[0].thresholds.common = 1.5 * 1.001;
        assert!(outage_probability(0, &s).is_err());
    }

    #[test]
    fn op_estimate_provenance() {
        let e = OpEstimate::exact(0.25);
        assert_eq!(e.kind, OpKind::Exact);
        assert!(e.std_error.is_none());
        let m = OpEstimate::monte_carlo(0.25, 0.01);
        assert_eq!(m.kind, OpKind::MonteCarlo);
        assert_eq!(m.std_error, Some(0.01));
    }

    #[test]
    fn power_split_validation() {
        assert!(RsmaPower::new(1.2, vec![0.3, 0.1]).is_err());
        assert!(RsmaPower::new(0.6, vec![0.3, 0.2]).is_err());
        assert!(RsmaPower::new(0.6, vec![0.4, -0.0]).is_err());
        assert!(RsmaPower::new(0.6, vec![0.3, 0.1]).is_ok());
    }
}

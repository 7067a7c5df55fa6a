//! Property-based invariants over randomized inputs.

use proptest::prelude::*;
use uavfas_core::channel::{
    effective_theta, fas_gain_cdf, gamma_gain_cdf, port_index_to_1d, port_index_to_2d,
    FadingParams, FasConfig,
};
use uavfas_core::geometry::{los_probability, EnvParams};
use uavfas_core::rsma::{outage_factors, RsmaScenario};
use uavfas_core::specfun::{reg_lower_inc_gamma, student_t_cdf, student_t_quantile};

fn reference_env() -> EnvParams {
    EnvParams {
        mu1: 5.0188,
        mu2: 0.3511,
        eta_los: 4.65e-5,
        eta_nlos: 4.65e-5,
        beta: 2.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// P(a, ·) is a CDF: zero at the origin, nondecreasing, approaching 1.
    #[test]
    fn incomplete_gamma_is_a_cdf(a in 0.5f64..10.0, x in 0.0f64..40.0, dx in 0.0f64..5.0) {
        let p0 = reg_lower_inc_gamma(a, 0.0).unwrap();
        prop_assert_eq!(p0, 0.0);
        let p1 = reg_lower_inc_gamma(a, x).unwrap();
        let p2 = reg_lower_inc_gamma(a, x + dx).unwrap();
        prop_assert!(p2 + 1e-13 >= p1, "not monotone at a={}, x={}", a, x);
        let tail = reg_lower_inc_gamma(a, 40.0 * (1.0 + a)).unwrap();
        prop_assert!(tail > 1.0 - 1e-9);
    }

    /// The quantile inverts the CDF on the lower half to 1e-9.
    #[test]
    fn student_t_round_trip(x in -8.0f64..0.0, dof_idx in 0usize..4) {
        let dof = [1.0, 2.0, 25.0, 200.0][dof_idx];
        let p = student_t_cdf(x, dof).unwrap();
        prop_assume!(p > 1e-300);
        let back = student_t_quantile(p, dof).unwrap();
        prop_assert!((back - x).abs() < 1e-9 * (1.0 + x.abs()));
    }

    /// LoS probability is strictly increasing in the elevation angle.
    #[test]
    fn los_probability_strictly_increasing(
        lo in 0.0f64..89.0,
        gap in 0.01f64..1.0,
    ) {
        let env = reference_env();
        let hi = (lo + gap).min(90.0);
        let a = los_probability(lo, &env).unwrap();
        let b = los_probability(hi, &env).unwrap();
        prop_assert!(b > a, "P_LoS({}) = {} !< P_LoS({}) = {}", lo, a, hi, b);
    }

    /// 1-D and 2-D port indices are mutually inverse bijections.
    #[test]
    fn port_mapping_round_trips(n1 in 1usize..6, n2 in 1usize..6, pick in 0usize..36) {
        let cfg = FasConfig::new(n1, n2, 1.0, 1.0, 25.0).unwrap();
        let n = pick % cfg.ports() + 1;
        let p = port_index_to_2d(n, &cfg).unwrap();
        prop_assert_eq!(port_index_to_1d(p, &cfg).unwrap(), n);
    }

    /// The best of N dependent ports stochastically dominates one port:
    /// its CDF never exceeds the marginal. And the dependence parameter
    /// stays admissible for every grid geometry.
    #[test]
    fn best_port_dominates_single_port(
        g in 0.0f64..6.0,
        n1 in 1usize..4,
        n2 in 1usize..4,
        w in 0.05f64..2.0,
    ) {
        let f = FadingParams::new(2.0, 1.0).unwrap();
        let cfg = FasConfig::new(n1, n2, w, w, 25.0).unwrap();
        let theta = effective_theta(&cfg).unwrap();
        let floor = if cfg.ports() > 1 { -1.0 / (cfg.ports() as f64 - 1.0) } else { -1.0 };
        prop_assert!(theta > floor && theta <= 1.0);
        let fas = fas_gain_cdf(g, &f, &cfg).unwrap();
        let single = gamma_gain_cdf(g, &f).unwrap();
        prop_assert!(fas <= single + 1e-9, "N={} fas {} > marginal {}", cfg.ports(), fas, single);
    }
}

proptest! {
    // The outage evaluation runs two quadratures per call; keep the case
    // count modest.
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// More power on either hop never hurts: the survival product is
    /// nondecreasing in both transmit powers on randomized scenarios.
    #[test]
    fn outage_monotone_in_power(
        dbm in 8.0f64..28.0,
        bump in 1.05f64..4.0,
        k in 0usize..2,
        gamma_c in 0.02f64..0.5,
        gamma_p in 0.02f64..0.3,
    ) {
        let mut s = RsmaScenario::default_two_user().with_power_dbm(dbm);
        for u in &mut s.users {
            u.thresholds.common = gamma_c;
            u.thresholds.private = gamma_p;
        }
        let base = outage_factors(k, &s).unwrap().survival_product();
        let mut more_b = s.clone();
        more_b.p_b *= bump;
        let mut more_a = s.clone();
        more_a.p_a *= bump;
        prop_assert!(outage_factors(k, &more_b).unwrap().survival_product() >= base);
        prop_assert!(outage_factors(k, &more_a).unwrap().survival_product() >= base);
    }
}

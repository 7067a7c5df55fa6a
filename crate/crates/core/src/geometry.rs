//! Air-to-ground geometry and large-scale propagation: elevation angles,
//! LoS/NLoS probabilities, link distances and the composite path-loss
//! coefficient.
//!
//! The LoS probability is the logistic S-curve
//! `P_LoS = 1 / (1 + μ₁ exp(-μ₂ (θ - μ₁)))` with the elevation angle θ in
//! **degrees**; with μ₁ ≈ 5 the curve only makes sense on a degree scale
//! (on radians it would saturate immediately). NLoS is always derived as
//! the complement. Path loss mixes the LoS/NLoS reference coefficients by
//! their probabilities and applies the `r^{-β}` distance law — it is the
//! expected coefficient, deterministic per link, and the Monte Carlo engine
//! uses the same mixture so analytic and simulated channels share identical
//! large-scale terms.

use crate::error::{Error, Result};

/// A 3-D position in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Propagation-environment constants: logistic LoS parameters (μ₁, μ₂),
/// 1-meter reference path-loss coefficients for LoS/NLoS (η₁, η₂) and the
/// path-loss exponent β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvParams {
    pub mu1: f64,
    pub mu2: f64,
    pub eta_los: f64,
    pub eta_nlos: f64,
    pub beta: f64,
}

impl EnvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu1 > 0.0 && self.mu2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu1 and mu2 must be positive, got {} and {}",
                self.mu1, self.mu2
            )));
        }
        if !(self.eta_los > 0.0 && self.eta_nlos > 0.0) {
            return Err(Error::InvalidParameter(
                "reference path-loss coefficients must be positive".into(),
            ));
        }
        if !(self.beta >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "path-loss exponent must be at least 1, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Ground-projected distance between the aerial node and a ground node.
pub fn horizontal_distance(a: Position3, i: Position3) -> f64 {
    let dx = a.x - i.x;
    let dy = a.y - i.y;
    (dx * dx + dy * dy).sqrt()
}

/// Elevation angle in degrees, `atan(z_a / d)` with d the horizontal
/// distance. Uses the aerial node's absolute altitude (ground users sit at
/// z = 0 in every scenario here, so relative and absolute coincide);
/// 90° when the ground node is directly underneath.
pub fn elevation_angle(a: Position3, i: Position3) -> Result<f64> {
    let d = horizontal_distance(a, i);
    if d == 0.0 {
        if a.z == 0.0 {
            return Err(Error::Domain(
                "elevation angle undefined for coincident nodes at zero altitude".into(),
            ));
        }
        return Ok(90.0);
    }
    Ok((a.z / d).atan().to_degrees())
}

/// LoS probability of an air-ground link at elevation `theta_deg` degrees.
pub fn los_probability(theta_deg: f64, env: &EnvParams) -> Result<f64> {
    if !(0.0..=90.0).contains(&theta_deg) {
        return Err(Error::Domain(format!(
            "elevation angle must be in [0, 90] degrees, got {theta_deg}"
        )));
    }
    Ok(1.0 / (1.0 + env.mu1 * (-env.mu2 * (theta_deg - env.mu1)).exp()))
}

/// NLoS probability: exactly the complement of [`los_probability`].
pub fn nlos_probability(theta_deg: f64, env: &EnvParams) -> Result<f64> {
    Ok(1.0 - los_probability(theta_deg, env)?)
}

/// Full 3-D link distance.
pub fn link_distance(a: Position3, i: Position3) -> f64 {
    let d = horizontal_distance(a, i);
    let dz = a.z - i.z;
    (d * d + dz * dz).sqrt()
}

/// Composite path-loss coefficient:
/// `(η₁ P_LoS + η₂ P_NLoS) · r^{-β}`.
pub fn path_loss(a: Position3, i: Position3, env: &EnvParams) -> Result<f64> {
    let r = link_distance(a, i);
    if r == 0.0 {
        return Err(Error::Domain(
            "path loss undefined at zero link distance".into(),
        ));
    }
    let p_los = los_probability(elevation_angle(a, i)?, env)?;
    Ok((env.eta_los * p_los + env.eta_nlos * (1.0 - p_los)) * r.powf(-env.beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_env() -> EnvParams {
        EnvParams {
            mu1: 5.0188,
            mu2: 0.3511,
            eta_los: 4.65e-5,
            eta_nlos: 4.65e-5,
            beta: 2.0,
        }
    }

    #[test]
    fn horizontal_distance_cases() {
        let a = Position3::new(10.0, 10.0, 100.0);
        let bs = Position3::new(0.0, 0.0, 0.0);
        assert!((horizontal_distance(a, bs) - 200.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(horizontal_distance(a, a), 0.0);
        let u1 = Position3::new(200.0, 200.0, 0.0);
        let u2 = Position3::new(180.0, 180.0, 0.0);
        assert!((horizontal_distance(u1, u2) - 800.0_f64.sqrt()).abs() < 1e-12);
        // Symmetric in its arguments.
        assert_eq!(horizontal_distance(a, u1), horizontal_distance(u1, a));
    }

    #[test]
    fn elevation_angle_cases() {
        let a = Position3::new(0.0, 100.0, 100.0);
        let g = Position3::new(0.0, 0.0, 0.0);
        assert!((elevation_angle(a, g).unwrap() - 45.0).abs() < 1e-12);

        let above = Position3::new(5.0, 5.0, 100.0);
        let under = Position3::new(5.0, 5.0, 0.0);
        assert_eq!(elevation_angle(above, under).unwrap(), 90.0);

        let uav = Position3::new(10.0, 10.0, 100.0);
        let u1 = Position3::new(200.0, 200.0, 0.0);
        let d = horizontal_distance(uav, u1);
        let want = (100.0 / d).atan().to_degrees();
        assert!((elevation_angle(uav, u1).unwrap() - want).abs() < 1e-12);
        assert!((want - 20.41).abs() < 0.02, "θ for user 1: {want}");

        let both_zero = Position3::new(1.0, 1.0, 0.0);
        assert!(elevation_angle(both_zero, both_zero).is_err());
    }

    #[test]
    fn los_probability_reference_points() {
        let env = reference_env();
        // At θ = μ₁ the exponent vanishes.
        let at_mu1 = los_probability(env.mu1, &env).unwrap();
        assert!((at_mu1 - 1.0 / 6.0188).abs() < 1e-12);
        // Near-vertical link.
        let at_90 = los_probability(90.0, &env).unwrap();
        assert!((1.0 - at_90).abs() < 1e-10, "P_LoS(90°) = {at_90}");
        // Grazing link.
        let at_0 = los_probability(0.0, &env).unwrap();
        let want = 1.0 / (1.0 + 5.0188 * (0.3511 * 5.0188_f64).exp());
        assert!((at_0 - want).abs() < 1e-12);
        assert!((at_0 - 0.0331).abs() < 1e-4, "P_LoS(0°) = {at_0}");
    }

    #[test]
    fn los_probability_strictly_increasing_and_complement() {
        let env = reference_env();
        let mut prev = 0.0;
        let mut theta = 0.0;
        while theta <= 90.0 {
            let p = los_probability(theta, &env).unwrap();
            assert!(p > prev, "not increasing at θ={theta}");
            let q = nlos_probability(theta, &env).unwrap();
            assert_eq!(p + q, 1.0, "complement not exact at θ={theta}");
            prev = p;
            theta += 1.5;
        }
        assert!(los_probability(-0.1, &env).is_err());
        assert!(los_probability(90.1, &env).is_err());
    }

    #[test]
    fn link_distance_cases() {
        let a = Position3::new(10.0, 10.0, 100.0);
        let bs = Position3::new(0.0, 0.0, 0.0);
        assert!((link_distance(a, bs) - 10200.0_f64.sqrt()).abs() < 1e-12);
        assert_eq!(link_distance(a, a), 0.0);
        let u1 = Position3::new(200.0, 200.0, 0.0);
        assert!((link_distance(a, u1) - 82200.0_f64.sqrt()).abs() < 1e-12);
        assert!((link_distance(a, u1) - 286.7054).abs() < 1e-3);
    }

    #[test]
    fn pythagoras_identity() {
        let a = Position3::new(3.0, -7.0, 120.0);
        let i = Position3::new(-40.0, 2.5, 1.5);
        let r = link_distance(a, i);
        let d = horizontal_distance(a, i);
        let dz = a.z - i.z;
        assert!((r * r - (d * d + dz * dz)).abs() <= 4.0 * f64::EPSILON * r * r);
    }

    #[test]
    fn path_loss_reference_points() {
        let env = reference_env();
        let a = Position3::new(10.0, 10.0, 100.0);
        let bs = Position3::new(0.0, 0.0, 0.0);
        // η₁ = η₂ collapses the mixture: L = η / r².
        let want = 4.65e-5 / 10200.0;
        let got = path_loss(a, bs, &env).unwrap();
        assert!(((got - want) / want).abs() < 1e-12, "L_ab = {got:e}");
        assert!((got - 4.5588e-9).abs() < 1e-13);

        // Reference-distance definition: r = 1 m gives η itself.
        let one_m = Position3::new(0.0, 0.0, 1.0);
        let below = Position3::new(0.0, 0.0, 0.0);
        let at_ref = path_loss(one_m, below, &env).unwrap();
        assert!(((at_ref - 4.65e-5) / 4.65e-5).abs() < 1e-12);

        assert!(path_loss(bs, bs, &env).is_err());
    }

    #[test]
    fn path_loss_mixture_independent_of_los_when_etas_match() {
        let env = reference_env();
        let mut env_skewed = env;
        env_skewed.eta_los = 1e-4;
        env_skewed.eta_nlos = 1e-5;
        let a = Position3::new(0.0, 50.0, 80.0);
        let g = Position3::new(0.0, 0.0, 0.0);
        // With matching etas the result is η r^{-β} regardless of the angle.
        let r = link_distance(a, g);
        let got = path_loss(a, g, &env).unwrap();
        assert!(((got - 4.65e-5 / (r * r)) / got).abs() < 1e-12);
        // With distinct etas it must sit strictly between the two pure cases.
        let mixed = path_loss(a, g, &env_skewed).unwrap();
        let lo = 1e-5 / (r * r);
        let hi = 1e-4 / (r * r);
        assert!(mixed > lo && mixed < hi);
    }

    #[test]
    fn path_loss_decreases_with_altitude_at_fixed_ground_offset() {
        let env = reference_env();
        let g = Position3::new(0.0, 0.0, 0.0);
        let mut prev = f64::INFINITY;
        for z in [50.0, 100.0, 200.0, 400.0] {
            let a = Position3::new(60.0, 80.0, z);
            let l = path_loss(a, g, &env).unwrap();
            assert!(l < prev, "path loss not decreasing at z={z}");
            prev = l;
        }
    }
}

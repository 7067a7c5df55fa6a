//! Bessel function J₀ and the spherical j₀, the two candidate spatial
//! correlation kernels for the port grid.

/// Cylindrical Bessel function of the first kind, order zero.
///
/// Power series for |x| ≤ 12 (absolute error ~1e-12 thanks to the moderate
/// cancellation in that range), Hankel asymptotic expansion beyond
/// (absolute error ~1e-8, ample for correlation entries whose magnitude is
/// already below 0.3 there).
pub fn bessel_j0(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= 12.0 {
        // J0(x) = Σ (-1)^k (x²/4)^k / (k!)²
        let q = ax * ax / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..200 {
            term *= -q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-18 {
                break;
            }
        }
        sum
    } else {
        // Hankel expansion: J0(x) ≈ sqrt(2/(πx)) [P cos(x - π/4) - Q sin(x - π/4)]
        let z = 8.0 / ax;
        let y = z * z;
        let p = 1.0
            + y * (-0.1098628627e-2
                + y * (0.2734510407e-4 + y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
        let q = z
            * (-0.1562499995e-1
                + y * (0.1430488765e-3
                    + y * (-0.6911147651e-5 + y * (0.7621095161e-6 + y * (-0.934935152e-7)))));
        let xx = ax - std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * ax)).sqrt() * (p * xx.cos() - q * xx.sin())
    }
}

/// Spherical Bessel function j₀(x) = sin(x)/x, the 3-D isotropic-scattering
/// kernel.
pub fn spherical_j0(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: J0(x) = (1/π) ∫₀^π cos(x sin τ) dτ by composite
    /// Simpson quadrature.
    fn j0_integral_oracle(x: f64) -> f64 {
        let n = 4000; // even
        let h = std::f64::consts::PI / n as f64;
        let f = |t: f64| (x * t.sin()).cos();
        let mut s = f(0.0) + f(std::f64::consts::PI);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0 / std::f64::consts::PI
    }

    #[test]
    fn j0_at_zero() {
        assert_eq!(bessel_j0(0.0), 1.0);
    }

    #[test]
    fn j0_first_zero() {
        // First positive root of J0.
        let z1 = 2.404825557695773;
        assert!(
            bessel_j0(z1).abs() < 1e-9,
            "J0 at its first zero: {}",
            bessel_j0(z1)
        );
    }

    #[test]
    fn j0_matches_integral_oracle() {
        for &x in &[0.5, 2.405, 4.442882938158366, 8.0, 11.5, 15.0, 20.0, 30.0] {
            let got = bessel_j0(x);
            let want = j0_integral_oracle(x);
            assert!(
                (got - want).abs() < 1e-7,
                "J0({x}): got {got}, oracle {want}"
            );
        }
        // The diagonal-port separation 2π√(1/2); frozen from the oracle.
        assert!((bessel_j0(4.442882938158366) - (-0.3332922997674592)).abs() < 1e-10);
    }

    #[test]
    fn j0_even() {
        for &x in &[0.7, 3.3, 14.0] {
            assert_eq!(bessel_j0(x), bessel_j0(-x));
        }
    }

    #[test]
    fn spherical_j0_values() {
        assert_eq!(spherical_j0(0.0), 1.0);
        assert!((spherical_j0(std::f64::consts::PI)).abs() < 1e-15);
        assert!((spherical_j0(1.0) - 1.0_f64.sin()).abs() < 1e-15);
    }
}

//! Gamma function, regularized incomplete gamma functions and their inverse.
//!
//! The incomplete gamma pair is the backbone of the fading model: the channel
//! gain CDF is `P(m, m g / Ω)` and its complement feeds the tail-accurate
//! survival computations. Accuracy target is 1e-12 absolute over the shape
//! range exercised by the link model (m in [0.5, 10]) and well beyond.

use crate::error::{Error, Result};

/// Lanczos coefficients (g = 607/128, 15 terms); relative error below 1e-14
/// over the positive real axis.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_746,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_140_8e-5,
    3.689_918_265_953_162_5e-6,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Natural log of the Gamma function, `ln Γ(a)`, for `a > 0`.
pub fn ln_gamma(a: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires a > 0, got {a}")));
    }
    Ok(ln_gamma_unchecked(a))
}

pub(crate) fn ln_gamma_unchecked(a: f64) -> f64 {
    // Reflection is not needed for a > 0; evaluate the Lanczos sum directly.
    let mut sum = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (a + (k as f64 - 1.0));
    }
    let t = a + LANCZOS_G - 0.5;
    LN_SQRT_2PI + (a - 0.5) * t.ln() - t + sum.ln()
}

fn check_inc_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "regularized incomplete gamma requires a > 0, got a={a}"
        )));
    }
    if !(x >= 0.0) {
        return Err(Error::Domain(format!(
            "regularized incomplete gamma requires x >= 0, got x={x}"
        )));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(a, x) = γ(a, x) / Γ(a)`.
///
/// Series expansion for `x < a + 1`, continued fraction otherwise; both sides
/// converge to ~1e-15 and P is accurate in absolute terms everywhere and in
/// relative terms when it is small.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    check_inc_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(lower_series(a, x))
    } else {
        Ok(1.0 - upper_cf(a, x))
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`, computed
/// directly so the deep tail keeps relative precision.
pub fn reg_upper_inc_gamma(a: f64, x: f64) -> Result<f64> {
    check_inc_gamma_args(a, x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - lower_series(a, x))
    } else {
        Ok(upper_cf(a, x))
    }
}

/// ln of the prefactor x^a e^{-x} / Γ(a); shared by both expansions.
fn ln_prefactor(a: f64, x: f64) -> f64 {
    a * x.ln() - x - ln_gamma_unchecked(a)
}

fn series_iterations(a: f64) -> usize {
    // Terms decay like x/(a+n); near x ≈ a the decay only kicks in after
    // O(sqrt(a)) terms, so scale the budget for large shapes.
    200 + (12.0 * a.sqrt()) as usize
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..series_iterations(a) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    let ln_p = ln_prefactor(a, x) + (sum * a).ln() - a.ln();
    clamp_unit(ln_p.exp())
}

fn upper_cf(a: f64, x: f64) -> f64 {
    // Modified Lentz continued fraction for Q(a, x).
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..series_iterations(a) {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    clamp_unit((ln_prefactor(a, x) + h.ln()).exp())
}

fn clamp_unit(p: f64) -> f64 {
    debug_assert!(
        p > -1e-9 && p < 1.0 + 1e-9,
        "incomplete gamma left [0,1] by more than 1e-9: {p}"
    );
    p.clamp(0.0, 1.0)
}

/// Gamma density `x^(a-1) e^(-x) / Γ(a)`; derivative of `P(a, ·)`.
pub(crate) fn gamma_pdf(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return if a == 1.0 && x == 0.0 { 1.0 } else { 0.0 };
    }
    ((a - 1.0) * x.ln() - x - ln_gamma_unchecked(a)).exp()
}

/// Inverse of the regularized lower incomplete gamma: the `x` with
/// `P(a, x) = p`.
///
/// Wilson–Hilferty seed polished by safeguarded Newton iteration on `P`;
/// converges to ~1e-13 relative for the full shape range used here.
pub fn inv_reg_lower_inc_gamma(a: f64, p: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "inverse incomplete gamma requires a > 0, got a={a}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "inverse incomplete gamma requires p in [0,1], got {p}"
        )));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }

    // Wilson–Hilferty: x ≈ a (1 - 1/(9a) + z/(3 sqrt(a)))^3.
    let z = crate::specfun::normal::norm_quantile(p)?;
    let w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * a.sqrt());
    let mut x = if w > 0.0 { a * w * w * w } else { 0.0 };
    if x <= 0.0 || !x.is_finite() {
        // Small-p power-law start: P(a,x) ≈ x^a / (a Γ(a)).
        x = (p.ln() + a.ln() + ln_gamma_unchecked(a)).exp().powf(1.0 / a.max(1e-300));
        if x <= 0.0 || !x.is_finite() {
            x = 1e-100;
        }
    }

    // Newton with a bisection bracket as the safety net.
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    for _ in 0..200 {
        let err = reg_lower_inc_gamma(a, x)? - p;
        if err > 0.0 {
            hi = hi.min(x);
        } else {
            lo = lo.max(x);
        }
        let deriv = gamma_pdf(a, x);
        let mut step = if deriv > 0.0 { err / deriv } else { 0.0 };
        if step == 0.0 && err != 0.0 {
            // Flat density; bisect instead.
            step = if err > 0.0 { (x - lo) / 2.0 } else { -(x - lo) };
        }
        let mut next = x - step;
        if !(next > lo && (hi.is_infinite() || next < hi)) {
            next = if hi.is_finite() { 0.5 * (lo + hi) } else { x * 2.0 + 1.0 };
        }
        let dx = (next - x).abs();
        x = next;
        if dx <= 1e-13 * (1.0 + x.abs()) {
            break;
        }
    }
    Ok(x)
}

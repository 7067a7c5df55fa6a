//! Gauss–Legendre and Gauss–Hermite rules with a process-wide cache.
//!
//! Node counts used by the mixture quadrature double from 64 up to 512, so
//! only a handful of rules ever get built; they are computed once and shared
//! behind a mutex.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of one quadrature rule.
#[derive(Debug)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type Cache = Mutex<HashMap<(u8, usize), Arc<QuadRule>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

const KIND_LEGENDRE_01: u8 = 0;
const KIND_HERMITE: u8 = 1;

/// Gauss–Legendre rule mapped to (0, 1): integrates ∫₀¹ f(u) du.
pub fn gauss_legendre_01(n: usize) -> Arc<QuadRule> {
    rule(KIND_LEGENDRE_01, n, build_legendre_01)
}

/// Gauss–Hermite rule (physicists' weight): Σ wᵢ f(xᵢ) ≈ ∫ e^{-x²} f(x) dx.
pub fn gauss_hermite(n: usize) -> Arc<QuadRule> {
    rule(KIND_HERMITE, n, build_hermite)
}

fn rule(kind: u8, n: usize, build: fn(usize) -> QuadRule) -> Arc<QuadRule> {
    let mut guard = cache().lock().expect("quadrature cache poisoned");
    guard
        .entry((kind, n))
        .or_insert_with(|| Arc::new(build(n)))
        .clone()
}

fn build_legendre_01(n: usize) -> QuadRule {
    // Newton iteration on P_n over [-1, 1], then affine map to (0, 1).
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        // Map [-1,1] -> [0,1].
        nodes[i] = 0.5 * (1.0 - z);
        nodes[n - 1 - i] = 0.5 * (1.0 + z);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    QuadRule { nodes, weights }
}

fn build_hermite(n: usize) -> QuadRule {
    // Golub–Welsch: eigenvalues of the Jacobi matrix are the nodes, the
    // squared first eigenvector components scaled by the total mass √π are
    // the weights. Off-diagonal entries for the physicists' weight are
    // √(j/2). Stays accurate at the large rule sizes the doubling scheme
    // reaches, where Newton-on-recurrence drifts.
    let mut diag = vec![0.0; n];
    let mut off: Vec<f64> = (1..n).map(|j| (j as f64 / 2.0).sqrt()).collect();
    off.push(0.0);
    let mut first_row = vec![0.0; n];
    first_row[0] = 1.0;
    tql_first_row(&mut diag, &mut off, &mut first_row);

    let mass = std::f64::consts::PI.sqrt();
    let mut pairs: Vec<(f64, f64)> = diag
        .into_iter()
        .zip(first_row)
        .map(|(node, q0)| (node, mass * q0 * q0))
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("nodes are finite"));
    let (nodes, weights) = pairs.into_iter().unzip();
    QuadRule { nodes, weights }
}

/// Implicit-shift QL for a symmetric tridiagonal matrix, accumulating only
/// the first row of the eigenvector matrix. `d` holds the diagonal (out:
/// eigenvalues), `e` the subdiagonal in `e[0..n-1]`.
fn tql_first_row(d: &mut [f64], e: &mut [f64], z0: &mut [f64]) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * f;
                z0[i] = c * z0[i] - s * f;
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_polynomial_exactness() {
        // ∫₀¹ u³ du = 1/4 is exact for n ≥ 2.
        let r = gauss_legendre_01(2);
        let s: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(u, w)| w * u * u * u)
            .sum();
        assert!((s - 0.25).abs() < 1e-14, "GL2 cubic: {s}");
    }

    #[test]
    fn legendre_smooth_integral() {
        // ∫₀¹ e^u du = e - 1 to near machine precision at n = 64.
        let r = gauss_legendre_01(64);
        let s: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(u, w)| w * u.exp())
            .sum();
        assert!((s - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn hermite_moments() {
        // Σ w = √π and Σ w x² = √π/2 for every rule size we use.
        for &n in &[64_usize, 128, 256, 512] {
            let r = gauss_hermite(n);
            let s0: f64 = r.weights.iter().sum();
            let s2: f64 = r
                .nodes
                .iter()
                .zip(&r.weights)
                .map(|(x, w)| w * x * x)
                .sum();
            let sqrt_pi = std::f64::consts::PI.sqrt();
            assert!((s0 - sqrt_pi).abs() < 1e-11, "GH{n} mass: {s0}");
            assert!((s2 - sqrt_pi / 2.0).abs() < 1e-10, "GH{n} 2nd moment: {s2}");
        }
    }

    #[test]
    fn hermite_gaussian_expectation() {
        // E[Φ(Z)] = 1/2 for Z standard normal, via z = √2 t.
        let r = gauss_hermite(64);
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        let s: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(t, w)| {
                w * inv_sqrt_pi * crate::specfun::normal::norm_cdf(std::f64::consts::SQRT_2 * t)
            })
            .sum();
        assert!((s - 0.5).abs() < 1e-12, "E[Φ(Z)] = {s}");
    }

    #[test]
    fn cache_returns_shared_rule() {
        let a = gauss_legendre_01(64);
        let b = gauss_legendre_01(64);
        assert!(Arc::ptr_eq(&a, &b));
    }
}

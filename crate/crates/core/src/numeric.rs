//! Floating-point root finding for univariate complex polynomials.
//!
//! Coefficient slices are ascending: `c[k]` multiplies `z^k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("simultaneous iteration did not converge after {iterations} sweeps (worst correction {worst:e})")]
    NoConvergence { iterations: usize, worst: f64 },
    #[error("non-finite value encountered")]
    NonFinite,
}

const MAX_SWEEPS: usize = 2000;

pub fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Newton correction p(z)/p'(z), evaluated through the reversed polynomial
/// when |z| > 1 to avoid overflow.
pub fn newton_ratio(c: &[Complex64], z: Complex64) -> Complex64 {
    let n = c.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp) = horner_with_derivative(c, z);
        return p / dp;
    }
    let w = z.inv();
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let (r, dr) = horner_with_derivative(&rev, w);
    z * r / (r * n as f64 - w * dr)
}

fn trim(c: &[Complex64]) -> &[Complex64] {
    let mut n = c.len();
    while n > 0 && c[n - 1] == Complex64::new(0.0, 0.0) {
        n -= 1;
    }
    &c[..n]
}

/// Starting points on circles whose radii come from the upper convex hull of
/// the points (k, log|c_k|).
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let logs: Vec<f64> = c
        .iter()
        .map(|a| if a.norm() > 0.0 { a.norm().ln() } else { f64::NEG_INFINITY })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let (i, j) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (j as f64 - i as f64) * (logs[k] - logs[i]) - (k as f64 - i as f64) * (logs[j] - logs[i]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let r = ((logs[i] - logs[j]) / m as f64).exp();
        for k in 0..m {
            let theta = 2.0 * PI * (k as f64) / (m as f64) + 2.0 * PI * (i as f64) / (n as f64) + sigma;
            out.push(Complex64::from_polar(r, theta));
        }
    }
    out
}

/// All complex roots by Aberth–Ehrlich simultaneous iteration followed by a
/// Newton polish. Intended for squarefree input; multiple roots converge slowly.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>, NumericError> {
    let c = trim(coeffs);
    if c.is_empty() {
        return Err(NumericError::ZeroPolynomial);
    }
    if c.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    if c.len() == 1 {
        return Ok(Vec::new());
    }
    // Zero roots are split off exactly.
    let zeros = c.iter().take_while(|a| a.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = c.len() - 1;
    let mut z = if m > 0 { initial_guesses(c) } else { Vec::new() };
    let mut converged = vec![false; m];
    let mut worst = f64::INFINITY;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && converged.iter().any(|d| !d) {
        sweeps += 1;
        worst = 0.0f64;
        for i in 0..m {
            if converged[i] {
                continue;
            }
            let ratio = newton_ratio(c, z[i]);
            if !ratio.re.is_finite() || !ratio.im.is_finite() {
                // p'(z) vanished: nudge and retry next sweep.
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                continue;
            }
            let s: Complex64 = (0..m).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let delta = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= delta;
            let rel = delta.norm() / (1.0 + z[i].norm());
            worst = worst.max(rel);
            if rel < 4.0 * f64::EPSILON || scaled_abs(c, z[i]) < 4.0 * m as f64 * f64::EPSILON {
                converged[i] = true;
            }
        }
    }
    if converged.iter().any(|d| !d) && worst > 1e-11 {
        return Err(NumericError::NoConvergence { iterations: sweeps, worst });
    }
    for zi in z.iter_mut() {
        *zi = polish(c, *zi, 3);
    }
    z.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
    if z.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(NumericError::NonFinite);
    }
    Ok(z)
}

/// A few Newton steps, keeping only steps that do not increase |p|.
pub fn polish(c: &[Complex64], mut z: Complex64, steps: usize) -> Complex64 {
    let mut best = scaled_abs(c, z);
    for _ in 0..steps {
        let cand = z - newton_ratio(c, z);
        let v = scaled_abs(c, cand);
        if v.is_finite() && v <= best {
            z = cand;
            best = v;
        } else {
            break;
        }
    }
    z
}

/// |p(z)| divided by Σ|c_k||z|^k, computed without overflow.
pub fn scaled_abs(c: &[Complex64], z: Complex64) -> f64 {
    let (p, s) = if z.norm() <= 1.0 {
        let mut s = 0.0;
        let mut pw = 1.0;
        for a in c {
            s += a.norm() * pw;
            pw *= z.norm();
        }
        (horner(c, z).norm(), s)
    } else {
        let w = z.inv();
        let rev: Vec<Complex64> = c.iter().rev().copied().collect();
        let mut s = 0.0;
        let mut pw = 1.0;
        for a in &rev {
            s += a.norm() * pw;
            pw *= w.norm();
        }
        (horner(&rev, w).norm(), s)
    };
    if s == 0.0 {
        0.0
    } else {
        p / s
    }
}

/// Radius of a disc about `z` guaranteed to contain a root (n·|p/p'|).
pub fn inclusion_radius(c: &[Complex64], z: Complex64) -> f64 {
    let c = trim(c);
    let n = c.len().saturating_sub(1) as f64;
    n * newton_ratio(c, z).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
        let mut p = vec![c(1.0, 0.0)];
        for &r in roots {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, &a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        p
    }

    fn matches(found: &[Complex64], expected: &[Complex64], tol: f64) -> bool {
        let mut used = vec![false; found.len()];
        expected.iter().all(|e| {
            match (0..found.len()).filter(|&i| !used[i]).min_by(|&a, &b| {
                (found[a] - e).norm().partial_cmp(&(found[b] - e).norm()).unwrap()
            }) {
                Some(i) if (found[i] - e).norm() < tol * (1.0 + e.norm()) => {
                    used[i] = true;
                    true
                }
                _ => false,
            }
        })
    }

    #[test]
    fn roots_of_unity() {
        let mut p = vec![c(0.0, 0.0); 8];
        p[0] = c(-1.0, 0.0);
        p[7] = c(1.0, 0.0);
        let roots = aberth(&p).unwrap();
        let expected: Vec<_> = (0..7).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 7.0)).collect();
        assert!(matches(&roots, &expected, 1e-13));
    }

    #[test]
    fn widely_scaled_roots() {
        let expected = [c(1e-6, 0.0), c(3.0, 1.0), c(-2e5, 0.5), c(7.0, -7.0), c(0.0, 1e3)];
        let roots = aberth(&from_roots(&expected)).unwrap();
        assert!(matches(&roots, &expected, 1e-9));
    }

    #[test]
    fn zero_roots_split_off() {
        let p = vec![c(0.0, 0.0), c(0.0, 0.0), c(-4.0, 0.0), c(1.0, 0.0)];
        let mut roots = aberth(&p).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!(matches(&roots, &[c(0.0, 0.0), c(0.0, 0.0), c(4.0, 0.0)], 1e-14));
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(aberth(&[c(0.0, 0.0)]), Err(NumericError::ZeroPolynomial));
    }

    #[test]
    fn inclusion_radius_covers_true_root() {
        let p = from_roots(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let z = c(2.001, 0.0);
        assert!(inclusion_radius(&p, z) >= 0.001);
    }
}

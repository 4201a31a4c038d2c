//! Normalized Hermite functions and their ladder algebra.
//!
//! The basis is orthonormal in L²(ℝ): `h_0(x) = π^{-1/4} e^{-x²/2}` and
//!
//! ```text
//! h_{k+1} = x √(2/(k+1)) h_k − √(k/(k+1)) h_{k-1}
//! ```
//!
//! The unnormalized Hermite polynomials overflow near k ≈ 20; this recurrence
//! stays O(1) for all k. Position and derivative act by the ladder relations
//!
//! ```text
//! x h_k   = √(k/2) h_{k-1} + √((k+1)/2) h_{k+1}
//! h_k'    = √(k/2) h_{k-1} − √((k+1)/2) h_{k+1}
//! ```
//!
//! so moment and gradient pairings of finite series are exact finite sums of
//! coefficients, with no quadrature anywhere.

use std::f64::consts::PI;

/// Values `h_0(x) .. h_max(x)`.
pub fn eval_basis(x: f64, max_mode: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(max_mode + 1);
    let h0 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    h.push(h0);
    if max_mode == 0 {
        return h;
    }
    h.push(x * 2f64.sqrt() * h0);
    for k in 1..max_mode {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * h[k] - (kf / (kf + 1.0)).sqrt() * h[k - 1];
        h.push(next);
    }
    h
}

/// Evaluate `Σ c_k h_k(x)`.
pub fn eval_series(coeffs: &[f64], x: f64) -> f64 {
    if coeffs.is_empty() {
        return 0.0;
    }
    let basis = eval_basis(x, coeffs.len() - 1);
    coeffs.iter().zip(basis.iter()).map(|(c, h)| c * h).sum()
}

/// Coefficients of `x · f` for `f = Σ c_k h_k`. Output has one more mode.
pub fn apply_position(coeffs: &[f64]) -> Vec<f64> {
    ladder(coeffs, 1.0)
}

/// Coefficients of `f'` for `f = Σ c_k h_k`. Output has one more mode.
pub fn apply_derivative(coeffs: &[f64]) -> Vec<f64> {
    ladder(coeffs, -1.0)
}

fn ladder(coeffs: &[f64], up_sign: f64) -> Vec<f64> {
    if coeffs.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; coeffs.len() + 1];
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let kf = k as f64;
        if k > 0 {
            out[k - 1] += c * (kf / 2.0).sqrt();
        }
        out[k + 1] += up_sign * c * ((kf + 1.0) / 2.0).sqrt();
    }
    out
}

/// Overlaps `⟨h_k, e^{-α x²}⟩` for `k ≤ max_mode`.
///
/// Odd entries vanish; even entries follow from the closed form
/// `∫ H_{2m}(x) e^{-p x²} dx = ((2m)!/m!) √(π/p) ((1-p)/p)^m` with
/// `p = α + 1/2`, carried as a ratio recurrence to avoid factorials.
pub fn gaussian_overlaps(alpha: f64, max_mode: usize) -> Vec<f64> {
    let p = alpha + 0.5;
    let q = (1.0 - p) / p;
    let mut out = vec![0.0; max_mode + 1];
    let mut t = PI.powf(0.25) / p.sqrt();
    out[0] = t;
    let mut m = 1usize;
    while 2 * m <= max_mode {
        let mf = m as f64;
        t *= q * ((2.0 * mf) * (2.0 * mf - 1.0)).sqrt() / (2.0 * mf);
        out[2 * m] = t;
        m += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid_overlap(k: usize, alpha: f64) -> f64 {
        // independent quadrature oracle for the closed-form overlaps
        let n = 40_000;
        let l = 14.0;
        let dx = 2.0 * l / n as f64;
        let mut acc = 0.0;
        for j in 0..n {
            let x = -l + j as f64 * dx;
            acc += eval_basis(x, k)[k] * (-alpha * x * x).exp();
        }
        acc * dx
    }

    #[test]
    fn ladder_norms_are_exact() {
        for k in 0..=20 {
            let mut c = vec![0.0; k + 1];
            c[k] = 1.0;
            let xk: f64 = apply_position(&c).iter().map(|v| v * v).sum();
            let dk: f64 = apply_derivative(&c).iter().map(|v| v * v).sum();
            let expect = k as f64 + 0.5;
            assert!((xk - expect).abs() < 1e-12, "|x h_{k}|^2 = {xk}");
            assert!((dk - expect).abs() < 1e-12, "|h_{k}'|^2 = {dk}");
        }
    }

    #[test]
    fn basis_is_orthonormal_under_quadrature() {
        let n = 8000;
        let l = 12.0;
        let dx = 2.0 * l / n as f64;
        let mut gram = [[0.0f64; 5]; 5];
        for j in 0..n {
            let x = -l + j as f64 * dx;
            let h = eval_basis(x, 4);
            for a in 0..5 {
                for b in 0..5 {
                    gram[a][b] += h[a] * h[b] * dx;
                }
            }
        }
        for a in 0..5 {
            for b in 0..5 {
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((gram[a][b] - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gaussian_overlaps_match_quadrature() {
        for &alpha in &[0.2, 0.5, 1.0, 3.0] {
            let t = gaussian_overlaps(alpha, 8);
            for k in 0..=8 {
                let oracle = trapezoid_overlap(k, alpha);
                assert!(
                    (t[k] - oracle).abs() < 1e-8,
                    "k={k} alpha={alpha}: {} vs {}",
                    t[k],
                    oracle
                );
            }
        }
    }

    #[test]
    fn series_evaluation_matches_basis() {
        let c = [0.3, -1.2, 0.0, 0.7];
        let x = 0.83;
        let h = eval_basis(x, 3);
        let direct = 0.3 * h[0] - 1.2 * h[1] + 0.7 * h[3];
        assert!((eval_series(&c, x) - direct).abs() < 1e-14);
    }
}

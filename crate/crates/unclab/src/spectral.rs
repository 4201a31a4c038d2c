//! Unitary Fourier transform, Plancherel symmetry of the deficit, Hermite
//! diagonalization, and the one-dimensional sharpened bound of de Bruijn.
//!
//! Convention: unitary, angular frequency,
//! `û(ξ) = (2π)^{-n/2} ∫ u(x) e^{-ix·ξ} dx`, under which `‖û‖ = ‖u‖`,
//! `‖ξû‖ = ‖∇u‖`, `‖∇û‖ = ‖xu‖`, and `δ(û) = δ(u)` with no constants.
//!
//! On the node layout `x_j = -L + jΔx` the discrete transform needs the phase
//! correction `û(ξ_k) = (Δx/√(2π)) (-1)^k FFT[(-1)^j u_j](k)` per axis (for
//! `N ≡ 0 mod 4`), and the output grid has half-width `L_ξ = πN/(2L)`.
//!
//! A real input has a real even transform channel and an imaginary odd one;
//! `fourier` returns the real representative `Re û + Im û`, whose parity
//! classes are discretely orthogonal, so all three quadratic functionals of
//! the complex transform are preserved exactly. The complex channels stay
//! available through `fourier_components`.
//!
//! de Bruijn's statement is phrased with the 2π-in-exponent transform; in the
//! oscillator units used here the substitution is `‖ω f̂‖ → ‖f'‖/(2π)` and the
//! bound's sharp constant becomes n/2 = 1/2 at zero distance:
//! `‖xf‖·‖f'‖ ≥ ½ [3 − 2(1 − d²/2)²]`.

use rustfft::{num_complex::Complex, FftPlanner};
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::funcrep::{Descriptor, SampledFunction};
use crate::gaussfit;

/// A function together with its discrete unitary Fourier transform.
#[derive(Debug, Clone)]
pub struct FourierPair {
    pub u: SampledFunction,
    pub u_hat: SampledFunction,
    pub convention: &'static str,
}

pub const CONVENTION: &str = "unitary-angular";

/// Real representative of the unitary transform of a real grid function.
pub fn fourier(u: &SampledFunction) -> Result<FourierPair> {
    let (re, im) = fourier_components(u)?;
    let u_hat = SampledFunction::linear_combination(1.0, &re, 1.0, &im)?;
    Ok(FourierPair {
        u: u.clone(),
        u_hat,
        convention: CONVENTION,
    })
}

/// `(Re û, Im û)` on the frequency grid.
pub fn fourier_components(u: &SampledFunction) -> Result<(SampledFunction, SampledFunction)> {
    match u {
        SampledFunction::Grid1D { half_width, values } => {
            let n = values.len();
            check_fft_size(n)?;
            let data: Vec<Complex<f64>> = values
                .iter()
                .map(|&v| Complex::new(v, 0.0))
                .collect();
            let out = transform_axes(data, 1, n, *half_width);
            let l_xi = PI * n as f64 / (2.0 * half_width);
            let re = SampledFunction::grid1d(l_xi, out.iter().map(|z| z.re).collect())?;
            let im = SampledFunction::grid1d(l_xi, out.iter().map(|z| z.im).collect())?;
            Ok((re, im))
        }
        SampledFunction::GridND {
            dimension,
            half_width,
            points_per_axis,
            values,
        } => {
            let n = *points_per_axis;
            check_fft_size(n)?;
            let data: Vec<Complex<f64>> = values
                .iter()
                .map(|&v| Complex::new(v, 0.0))
                .collect();
            let out = transform_axes(data, *dimension, n, *half_width);
            let l_xi = PI * n as f64 / (2.0 * half_width);
            let re = SampledFunction::grid_nd(
                *dimension,
                l_xi,
                n,
                out.iter().map(|z| z.re).collect(),
            )?;
            let im = SampledFunction::grid_nd(
                *dimension,
                l_xi,
                n,
                out.iter().map(|z| z.im).collect(),
            )?;
            Ok((re, im))
        }
        _ => Err(Error::UnsupportedConversion(
            "fourier expects a grid representation; use hermite_fourier or resample first".into(),
        )),
    }
}

fn check_fft_size(n: usize) -> Result<()> {
    if n % 4 != 0 {
        return Err(Error::InvalidInput(format!(
            "fourier path needs a point count divisible by 4, got {n}"
        )));
    }
    Ok(())
}

/// FFT along every axis with the node phase correction applied per axis.
fn transform_axes(
    mut data: Vec<Complex<f64>>,
    dimension: usize,
    n: usize,
    half_width: f64,
) -> Vec<Complex<f64>> {
    let dx = 2.0 * half_width / n as f64;
    let scale = (dx / (2.0 * PI).sqrt()).powi(dimension as i32);
    // (-1)^{j_1 + .. + j_n} on input
    apply_checkerboard(&mut data, dimension, n);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for axis in 0..dimension {
        let stride = n.pow((dimension - 1 - axis) as u32);
        let total = data.len();
        for start in 0..total {
            if (start / stride) % n != 0 {
                continue;
            }
            for k in 0..n {
                line[k] = data[start + k * stride];
            }
            fft.process(&mut line);
            for k in 0..n {
                data[start + k * stride] = line[k];
            }
        }
    }
    // (-1)^{k_1 + .. + k_n} and the quadrature scale on output
    apply_checkerboard(&mut data, dimension, n);
    for z in data.iter_mut() {
        *z *= scale;
    }
    data
}

fn apply_checkerboard(data: &mut [Complex<f64>], dimension: usize, n: usize) {
    for (flat, z) in data.iter_mut().enumerate() {
        let mut rest = flat;
        let mut parity = 0usize;
        for _ in 0..dimension {
            parity += rest % n;
            rest /= n;
        }
        if parity % 2 == 1 {
            *z = -*z;
        }
    }
}

/// Hermite coefficients of a function with an explicit truncation residual.
///
/// `residual = ‖f‖² − Σ c_k²` is carried, never dropped; `source_lhs` records
/// the measured `‖xf‖² + ‖f'‖²` of the source representation so the
/// de Bruijn comparison can include mass outside the truncated span.
#[derive(Debug, Clone, Serialize)]
pub struct HermiteSpectrum {
    pub coefficients: Vec<f64>,
    pub residual: f64,
    pub l2_sq: f64,
    pub source_lhs: f64,
}

/// Default truncation order.
pub const DEFAULT_MODES: usize = 30;

impl HermiteSpectrum {
    /// Spectrum of a 1-D function, `c_k = ⟨f, h_k⟩` for `k ≤ max_mode`.
    pub fn of(u: &SampledFunction, max_mode: usize) -> Result<Self> {
        let coefficients = match u {
            SampledFunction::Hermite { coefficients } => {
                let mut c = coefficients.clone();
                c.resize(max_mode + 1, 0.0);
                c
            }
            SampledFunction::Grid1D { .. } => {
                let truncated = u.resample(&Descriptor::Hermite {
                    modes: max_mode + 1,
                })?;
                truncated.raw().to_vec()
            }
            _ => {
                return Err(Error::UnsupportedConversion(
                    "hermite spectra are one-dimensional; resample first".into(),
                ))
            }
        };
        let l2_sq = u.norm_l2_sq();
        let kept: f64 = coefficients.iter().map(|c| c * c).sum();
        Ok(HermiteSpectrum {
            coefficients,
            residual: (l2_sq - kept).max(0.0),
            l2_sq,
            source_lhs: u.moment_sq() + u.grad_norm_sq(),
        })
    }

    /// Spectrum with no truncation remainder: the function IS the series.
    pub fn pure(coefficients: Vec<f64>) -> Result<Self> {
        let f = SampledFunction::hermite(coefficients.clone())?;
        Ok(HermiteSpectrum {
            coefficients,
            residual: 0.0,
            l2_sq: f.norm_l2_sq(),
            source_lhs: f.moment_sq() + f.grad_norm_sq(),
        })
    }

    pub fn to_function(&self) -> Result<SampledFunction> {
        SampledFunction::hermite(self.coefficients.clone())
    }
}

/// Image of a real spectrum under the unitary transform.
///
/// `h_k` is an eigenfunction with eigenvalue `(-i)^k`; separating the real
/// even channel from the imaginary odd one turns the phases into the real
/// signature `+,−,−,+` repeating with `k mod 4`. Magnitudes are untouched, so
/// every deficit-relevant quantity is preserved exactly.
pub fn hermite_fourier(s: &HermiteSpectrum) -> HermiteSpectrum {
    const SIGNATURE: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
    let coefficients = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| SIGNATURE[k % 4] * c)
        .collect();
    HermiteSpectrum {
        coefficients,
        residual: s.residual,
        l2_sq: s.l2_sq,
        source_lhs: s.source_lhs,
    }
}

/// Both sides of the oscillator-form Hermite sum.
#[derive(Debug, Clone, Serialize)]
pub struct DebruijnCheck {
    /// Measured `‖xf‖² + ‖f'‖²`.
    pub lhs: f64,
    /// `Σ (2k+1) c_k² + residual`.
    pub rhs: f64,
    pub margin: f64,
}

/// `lhs − rhs ≥ 0`, with equality exactly on pure truncated spectra: each
/// untracked mode contributes at least its ground-level energy.
pub fn debruijn_check(s: &HermiteSpectrum) -> Result<DebruijnCheck> {
    check_normalized(s.l2_sq)?;
    let rhs = s
        .coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| (2.0 * k as f64 + 1.0) * c * c)
        .sum::<f64>()
        + s.residual;
    let lhs = s.source_lhs;
    Ok(DebruijnCheck {
        lhs,
        rhs,
        margin: lhs - rhs,
    })
}

/// Right side of de Bruijn's bound at L² distance `d` from the extremal cone,
/// in oscillator units: `½ [3 − 2(1 − d²/2)²]`. Monotone on `[0, √2]`, equal
/// to the sharp constant 1/2 at d = 0.
pub fn debruijn_bound_at(d: f64) -> f64 {
    let c = 1.0 - 0.5 * d * d;
    0.5 * (3.0 - 2.0 * c * c)
}

/// Bound evaluated at the measured projection distance of `u`; callers
/// compare it with the measured product `‖xu‖·‖u'‖`.
pub fn debruijn_distance_bound(u: &SampledFunction, tol: f64) -> Result<f64> {
    check_normalized(u.norm_l2_sq())?;
    let p = gaussfit::project(u, tol)?;
    Ok(debruijn_bound_at(p.distance_sq.sqrt()))
}

fn check_normalized(l2_sq: f64) -> Result<()> {
    if (l2_sq.sqrt() - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "expected a normalized function, got squared norm {l2_sq}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deficit::compute_deficit;
    use crate::hermite;

    fn l2_diff(a: &SampledFunction, b: &SampledFunction) -> f64 {
        let d = SampledFunction::linear_combination(1.0, a, -1.0, b).unwrap();
        d.norm_l2_sq().sqrt()
    }

    fn grid(half_width: f64, n: usize, f: impl Fn(f64) -> f64) -> SampledFunction {
        Descriptor::Grid1D {
            half_width,
            point_count: n,
        }
        .sample(|x| f(x[0]))
        .unwrap()
    }

    #[test]
    fn ground_state_is_a_fixed_point() {
        let u = grid(16.0, 1024, |x| PI.powf(-0.25) * (-0.5 * x * x).exp());
        let pair = fourier(&u).unwrap();
        // self-dual box: L_xi = pi*N/(2L) = 32*pi != 16, so compare analytically
        let expect = pair
            .u_hat
            .descriptor()
            .sample(|x| PI.powf(-0.25) * (-0.5 * x[0] * x[0]).exp())
            .unwrap();
        assert!(l2_diff(&pair.u_hat, &expect) < 1e-8);
    }

    #[test]
    fn closed_form_gaussian_transform() {
        let u = grid(16.0, 1024, |x| (-x * x).exp());
        let pair = fourier(&u).unwrap();
        let expect = pair
            .u_hat
            .descriptor()
            .sample(|x| 0.5f64.sqrt() * (-x[0] * x[0] / 4.0).exp())
            .unwrap();
        assert!(l2_diff(&pair.u_hat, &expect) < 1e-7);
    }

    #[test]
    fn discrete_plancherel_is_exact() {
        let u = grid(12.0, 512, |x| (x + 0.3 * x * x) * (-0.4 * x * x).exp());
        let pair = fourier(&u).unwrap();
        assert!((pair.u_hat.norm_l2_sq() - u.norm_l2_sq()).abs() < 1e-12);
    }

    #[test]
    fn moment_and_gradient_exchange() {
        let u = grid(96.0, 8192, |x| {
            (1.0 + 0.3 * x * x) * (-0.5 * x * x).exp()
        });
        let pair = fourier(&u).unwrap();
        let grad = u.grad_norm_sq();
        let xi_moment = pair.u_hat.moment_sq();
        assert!(
            (xi_moment - grad).abs() <= 1e-6 * grad,
            "{xi_moment} vs {grad}"
        );
        let moment = u.moment_sq();
        let hat_grad = pair.u_hat.grad_norm_sq();
        assert!(
            (hat_grad - moment).abs() <= 1e-6 * moment,
            "{hat_grad} vs {moment}"
        );
    }

    #[test]
    fn deficit_is_fourier_symmetric() {
        let s = 1.09f64.sqrt();
        let u = grid(192.0, 32768, |x| {
            let h = hermite::eval_basis(x, 4);
            (h[0] + 0.3 * h[4]) / s
        });
        let du = compute_deficit(&u).deficit;
        let pair = fourier(&u).unwrap();
        let dh = compute_deficit(&pair.u_hat).deficit;
        assert!((dh - du).abs() <= 1e-6 * (1.0 + du), "{dh} vs {du}");
    }

    #[test]
    fn double_transform_is_the_parity_reflection() {
        let u = grid(12.0, 256, |x| (x + 0.2) * (-0.3 * x * x).exp());
        let (a, c) = fourier_components(&u).unwrap();
        let (a2re, a2im) = fourier_components(&a).unwrap();
        let (c2re, c2im) = fourier_components(&c).unwrap();
        let re = SampledFunction::linear_combination(1.0, &a2re, -1.0, &c2im).unwrap();
        let im = SampledFunction::linear_combination(1.0, &a2im, 1.0, &c2re).unwrap();
        let n = u.raw().len();
        let reflected: Vec<f64> = (0..n).map(|j| u.raw()[(n - j) % n]).collect();
        let reflected = u.with_values(reflected).unwrap();
        assert!(l2_diff(&re, &reflected) < 1e-12);
        assert!(im.norm_l2_sq().sqrt() < 1e-12);
    }

    #[test]
    fn fourier_rejects_nongrid_input() {
        let u = SampledFunction::hermite(vec![1.0]).unwrap();
        assert!(fourier(&u).is_err());
    }

    #[test]
    fn hermite_fourier_signature() {
        let s = HermiteSpectrum::pure(vec![1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        let t = hermite_fourier(&s);
        assert_eq!(t.coefficients, vec![1.0, -1.0, -1.0, 1.0, 1.0]);
        let ground = HermiteSpectrum::pure(vec![1.0]).unwrap();
        assert_eq!(hermite_fourier(&ground).coefficients, vec![1.0]);
    }

    #[test]
    fn hermite_fourier_preserves_the_deficit_exactly() {
        let s = HermiteSpectrum::pure(vec![0.6, 0.3, -0.4, 0.2, 0.5]).unwrap();
        let t = hermite_fourier(&s);
        let du = compute_deficit(&s.to_function().unwrap()).deficit;
        let dt = compute_deficit(&t.to_function().unwrap()).deficit;
        assert!((du - dt).abs() < 1e-12);
        // magnitudes untouched
        for (a, b) in s.coefficients.iter().zip(t.coefficients.iter()) {
            assert_eq!(a.abs(), b.abs());
        }
    }

    #[test]
    fn debruijn_identity_on_pure_spectra() {
        let cases: Vec<(Vec<f64>, f64)> = vec![
            (vec![1.0], 1.0),
            (vec![0.0, 1.0], 3.0),
            (vec![1.0 / 2.0f64.sqrt(), 1.0 / 2.0f64.sqrt()], 2.0),
        ];
        for (coeffs, expect) in cases {
            let s = HermiteSpectrum::pure(coeffs).unwrap();
            let check = debruijn_check(&s).unwrap();
            assert!((check.lhs - expect).abs() < 1e-12);
            assert!((check.rhs - expect).abs() < 1e-12);
            assert!(check.margin.abs() < 1e-12);
        }
    }

    #[test]
    fn debruijn_rejects_unnormalized_input() {
        let s = HermiteSpectrum::pure(vec![2.0]).unwrap();
        assert!(debruijn_check(&s).is_err());
    }

    #[test]
    fn debruijn_bound_endpoints_and_monotonicity() {
        assert!((debruijn_bound_at(0.0) - 0.5).abs() < 1e-15);
        assert!((debruijn_bound_at(2.0f64.sqrt()) - 1.5).abs() < 1e-14);
        let mut prev = debruijn_bound_at(0.0);
        for i in 1..=100 {
            let d = 2.0f64.sqrt() * i as f64 / 100.0;
            let b = debruijn_bound_at(d);
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn perturbed_ground_state_beats_the_bound() {
        let eps = 0.2;
        let norm = (1.0 + eps * eps).sqrt();
        let mut c = vec![0.0; 5];
        c[0] = 1.0 / norm;
        c[4] = eps / norm;
        let f = SampledFunction::hermite(c).unwrap();
        let measured = (f.moment_sq() * f.grad_norm_sq()).sqrt();
        let bound = debruijn_distance_bound(&f, 1e-9).unwrap();
        assert!(measured > bound, "measured {measured} vs bound {bound}");
    }
}

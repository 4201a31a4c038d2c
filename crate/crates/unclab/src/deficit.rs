//! The Heisenberg deficit, its scaling action, and the exact quartic
//! expansion of `δ(u + εφ)`.
//!
//! For u on ℝⁿ the deficit is
//!
//! ```text
//! δ(u) = (∫|x|²|u|²) (∫|∇u|²) − (n²/4) (∫|u|²)²
//! ```
//!
//! It is nonnegative, vanishes exactly on Gaussians c·e^{-α|x|²}, is
//! invariant under the L²-isometric dilation `(Φ_λ u)(x) = λ^{n/2} u(λx)`,
//! and is 4-homogeneous: δ(cu) = c⁴ δ(u).
//!
//! `variation_terms` evaluates the five coefficients of the exact polynomial
//! identity
//!
//! ```text
//! δ(u + εφ) = δ(u) + ε δ'(u)(φ) + ε² δ''(u)(φ) + ε³ δ'''(u)(φ) + ε⁴ δ(φ)
//! ```
//!
//! from cached pairings; no numerical differentiation of δ is involved.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::SampledFunction;

/// The three squared norms, the deficit, and the scaling diagnostics.
///
/// `lambda_grad = -(n/2)·‖u‖²/‖∇u‖²` and `lambda_moment = -(2/n)·‖xu‖²/‖u‖²`
/// agree exactly on the extremal cone; both are `None` for the zero function.
/// `delta_norm` is `‖u‖ + ‖∇u‖ + ‖xu‖`.
#[derive(Debug, Clone, Serialize)]
pub struct DeficitBreakdown {
    pub dimension: usize,
    pub l2_sq: f64,
    pub grad_sq: f64,
    pub moment_sq: f64,
    pub deficit: f64,
    pub lambda_grad: Option<f64>,
    pub lambda_moment: Option<f64>,
    pub delta_norm: f64,
}

impl DeficitBreakdown {
    /// Residual of the defining identity, for audit.
    pub fn identity_residual(&self) -> f64 {
        let n2 = (self.dimension * self.dimension) as f64;
        let recomputed = self.moment_sq * self.grad_sq - n2 / 4.0 * self.l2_sq * self.l2_sq;
        (self.deficit - recomputed).abs() / (1.0 + self.deficit.abs())
    }
}

/// Coefficients of the quartic expansion along a direction φ.
#[derive(Debug, Clone, Serialize)]
pub struct VariationTerms {
    pub d0: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl VariationTerms {
    pub fn eval(&self, eps: f64) -> f64 {
        self.d0 + eps * (self.d1 + eps * (self.d2 + eps * (self.d3 + eps * self.d4)))
    }
}

/// Scale factor of the dilation `Φ_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DilationFactor {
    lambda: f64,
}

impl DilationFactor {
    pub fn new(lambda: f64) -> Result<Self> {
        if lambda.is_finite() && lambda > 0.0 {
            Ok(DilationFactor { lambda })
        } else {
            Err(Error::InvalidInput(format!(
                "dilation factor must be positive, got {lambda}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.lambda
    }
}

/// Deficit and diagnostics of `u`. The raw deficit is reported even when
/// quadrature leaves it slightly negative.
pub fn compute_deficit(u: &SampledFunction) -> DeficitBreakdown {
    let n = u.dimension();
    let l2_sq = u.norm_l2_sq();
    let grad_sq = u.grad_norm_sq();
    let moment_sq = u.moment_sq();
    let deficit = moment_sq * grad_sq - (n * n) as f64 / 4.0 * l2_sq * l2_sq;
    let lambda_grad = if l2_sq > 0.0 && grad_sq > 0.0 {
        Some(-(n as f64 / 2.0) * l2_sq / grad_sq)
    } else {
        None
    };
    let lambda_moment = if l2_sq > 0.0 {
        Some(-(2.0 / n as f64) * moment_sq / l2_sq)
    } else {
        None
    };
    DeficitBreakdown {
        dimension: n,
        l2_sq,
        grad_sq,
        moment_sq,
        deficit,
        lambda_grad,
        lambda_moment,
        delta_norm: l2_sq.sqrt() + grad_sq.sqrt() + moment_sq.sqrt(),
    }
}

/// `Φ_λ(u)(x) = λ^{n/2} u(λx)` on grid and radial representations.
///
/// The box is rescaled `L → L/λ`, so the sample values are reused exactly and
/// no interpolation happens. Under this action `‖Φ_λu‖ = ‖u‖`,
/// `‖∇Φ_λu‖ = λ‖∇u‖`, `‖xΦ_λu‖ = λ^{-1}‖xu‖`, hence `δ(Φ_λu) = δ(u)`.
pub fn dilate(u: &SampledFunction, factor: DilationFactor) -> Result<SampledFunction> {
    let lambda = factor.get();
    let n = u.dimension();
    let amplitude = lambda.powf(n as f64 / 2.0);
    match u {
        SampledFunction::Grid1D { half_width, values } => SampledFunction::grid1d(
            half_width / lambda,
            values.iter().map(|v| amplitude * v).collect(),
        ),
        SampledFunction::GridND {
            dimension,
            half_width,
            points_per_axis,
            values,
        } => SampledFunction::grid_nd(
            *dimension,
            half_width / lambda,
            *points_per_axis,
            values.iter().map(|v| amplitude * v).collect(),
        ),
        SampledFunction::Radial {
            dimension,
            max_radius,
            values,
        } => SampledFunction::radial(
            *dimension,
            max_radius / lambda,
            values.iter().map(|v| amplitude * v).collect(),
        ),
        SampledFunction::Hermite { .. } => Err(Error::UnsupportedConversion(
            "dilation of a Hermite series goes through resample".into(),
        )),
    }
}

/// The five coefficients of `δ(u + εφ)` as a polynomial in ε.
pub fn variation_terms(u: &SampledFunction, phi: &SampledFunction) -> Result<VariationTerms> {
    let n2 = (u.dimension() * u.dimension()) as f64;
    let a_u = u.moment_sq();
    let b_u = u.grad_norm_sq();
    let c_u = u.norm_l2_sq();
    let a_p = phi.moment_sq();
    let b_p = phi.grad_norm_sq();
    let c_p = phi.norm_l2_sq();
    let p = u.inner_moment(phi)?;
    let q = u.inner_grad(phi)?;
    let r = u.inner(phi)?;
    Ok(VariationTerms {
        d0: a_u * b_u - n2 / 4.0 * c_u * c_u,
        d1: 2.0 * p * b_u + 2.0 * q * a_u - n2 * c_u * r,
        d2: a_p * b_u + 4.0 * q * p + b_p * a_u - n2 / 2.0 * c_u * c_p - n2 * r * r,
        d3: 2.0 * p * b_p + 2.0 * a_p * q - n2 * r * c_p,
        d4: a_p * b_p - n2 / 4.0 * c_p * c_p,
    })
}

/// Max over ε of the normalized gap between `δ(u + εφ)` and the quartic
/// polynomial evaluated from `variation_terms`.
pub fn expansion_residual(
    u: &SampledFunction,
    phi: &SampledFunction,
    eps_list: &[f64],
) -> Result<f64> {
    if eps_list.is_empty() {
        return Err(Error::InvalidInput("eps_list must be nonempty".into()));
    }
    let terms = variation_terms(u, phi)?;
    let mut worst: f64 = 0.0;
    for &eps in eps_list {
        let sum = SampledFunction::linear_combination(1.0, u, eps, phi)?;
        let direct = compute_deficit(&sum).deficit;
        let predicted = terms.eval(eps);
        worst = worst.max((direct - predicted).abs() / (1.0 + direct.abs()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::Descriptor;
    use std::f64::consts::PI;

    fn hermite_mode(k: usize) -> SampledFunction {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        SampledFunction::hermite(c).unwrap()
    }

    fn unit_gaussian_grid(n: usize) -> SampledFunction {
        Descriptor::Grid1D {
            half_width: 12.0,
            point_count: n,
        }
        .sample(|x| PI.powf(-0.25) * (-0.5 * x[0] * x[0]).exp())
        .unwrap()
    }

    #[test]
    fn gaussian_reaches_equality() {
        let b = compute_deficit(&unit_gaussian_grid(2048));
        assert!(b.deficit.abs() < 1e-8, "deficit = {}", b.deficit);
        assert!((b.lambda_grad.unwrap() + 1.0).abs() < 1e-6);
        assert!((b.lambda_moment.unwrap() + 1.0).abs() < 1e-6);
        assert!(b.identity_residual() < 1e-12);
    }

    #[test]
    fn hermite_mode_deficit_is_k_times_k_plus_one() {
        for k in 0..=10 {
            let b = compute_deficit(&hermite_mode(k));
            let expect = (k * (k + 1)) as f64;
            assert!(
                (b.deficit - expect).abs() < 1e-12,
                "k={k}: {} vs {}",
                b.deficit,
                expect
            );
        }
    }

    #[test]
    fn zero_function_has_zero_deficit_and_no_lambdas() {
        let z = SampledFunction::hermite(vec![0.0, 0.0, 0.0]).unwrap();
        let b = compute_deficit(&z);
        assert_eq!(b.deficit, 0.0);
        assert!(b.lambda_grad.is_none() && b.lambda_moment.is_none());
    }

    #[test]
    fn dilation_preserves_l2_and_scales_moment_and_gradient() {
        let u = unit_gaussian_grid(1024);
        let lam = DilationFactor::new(2.0).unwrap();
        let v = dilate(&u, lam).unwrap();
        assert!((v.norm_l2_sq() - u.norm_l2_sq()).abs() < 1e-10);
        assert!((v.moment_sq() - u.moment_sq() / 4.0).abs() < 1e-8);
        assert!((v.grad_norm_sq() - 4.0 * u.grad_norm_sq()).abs() < 1e-8);
    }

    #[test]
    fn dilation_identity_at_lambda_one() {
        let u = unit_gaussian_grid(1024);
        let v = dilate(&u, DilationFactor::new(1.0).unwrap()).unwrap();
        assert_eq!(u, v);
    }

    #[test]
    fn dilation_rejects_nonpositive_lambda() {
        assert!(DilationFactor::new(0.0).is_err());
        assert!(DilationFactor::new(-2.0).is_err());
    }

    #[test]
    fn deficit_is_dilation_invariant() {
        let u = Descriptor::Grid1D {
            half_width: 16.0,
            point_count: 4096,
        }
        .sample(|x| (1.0 + 0.3 * x[0] * x[0]) * (-0.5 * x[0] * x[0]).exp())
        .unwrap();
        let d = compute_deficit(&u).deficit;
        for lam in [0.25, 0.5, 2.0, 4.0] {
            let v = dilate(&u, DilationFactor::new(lam).unwrap()).unwrap();
            let dv = compute_deficit(&v).deficit;
            assert!(
                (dv - d).abs() <= 1e-8 * (1.0 + d),
                "lambda={lam}: {dv} vs {d}"
            );
        }
    }

    #[test]
    fn homogeneity_of_degree_four() {
        let u = hermite_mode(3);
        let d = compute_deficit(&u).deficit;
        for c in [-2.0, 0.5, 3.0] {
            let dc = compute_deficit(&u.scale(c).unwrap()).deficit;
            let expect = c.powi(4) * d;
            assert!((dc - expect).abs() <= 1e-10 * expect.abs().max(1.0));
        }
    }

    #[test]
    fn variation_zero_direction_vanishes() {
        let u = hermite_mode(2);
        let t = variation_terms(&u, &u.zeros_like()).unwrap();
        assert_eq!((t.d1, t.d2, t.d3, t.d4), (0.0, 0.0, 0.0, 0.0));
        assert!((t.d0 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn variation_along_itself_vanishes_for_gaussians() {
        let u = hermite_mode(0);
        let t = variation_terms(&u, &u).unwrap();
        for v in [t.d0, t.d1, t.d2, t.d3, t.d4] {
            assert!(v.abs() < 1e-12, "{t:?}");
        }
    }

    #[test]
    fn second_variation_toward_h4_is_four() {
        let t = variation_terms(&hermite_mode(0), &hermite_mode(4)).unwrap();
        assert!((t.d2 - 4.0).abs() < 1e-12, "{t:?}");
    }

    #[test]
    fn quartic_expansion_is_exact() {
        let u = hermite_mode(1);
        let phi = hermite_mode(3);
        let res = expansion_residual(&u, &phi, &[-1.0, -0.5, 0.1, 0.3, 1.0]).unwrap();
        assert!(res < 1e-9, "residual = {res}");
    }

    #[test]
    fn quartic_expansion_is_exact_on_grids() {
        let u = unit_gaussian_grid(1024);
        let phi = Descriptor::Grid1D {
            half_width: 12.0,
            point_count: 1024,
        }
        .sample(|x| x[0] * (-x[0] * x[0]).exp())
        .unwrap();
        let res = expansion_residual(&u, &phi, &[-1.0, -0.5, 0.1, 1.0]).unwrap();
        assert!(res < 1e-9, "residual = {res}");
    }

    #[test]
    fn first_variation_matches_central_differences() {
        // independent cross-check of d1 by numerical differentiation
        let u = hermite_mode(2);
        let phi = hermite_mode(4);
        let t = variation_terms(&u, &phi).unwrap();
        let h = 1e-4;
        let plus = compute_deficit(
            &SampledFunction::linear_combination(1.0, &u, h, &phi).unwrap(),
        )
        .deficit;
        let minus = compute_deficit(
            &SampledFunction::linear_combination(1.0, &u, -h, &phi).unwrap(),
        )
        .deficit;
        let fd = (plus - minus) / (2.0 * h);
        assert!((fd - t.d1).abs() < 1e-6, "fd={fd} d1={}", t.d1);
    }

    #[test]
    fn empty_eps_list_is_rejected() {
        let u = hermite_mode(0);
        assert!(expansion_residual(&u, &u, &[]).is_err());
    }

    #[test]
    fn lambda_diagnostics_agree_on_extremals() {
        for alpha in [0.2f64, 0.5, 1.0, 3.0] {
            let l = (40.0 / alpha).sqrt().max(8.0);
            let u = Descriptor::Grid1D {
                half_width: l,
                point_count: 4096,
            }
            .sample(|x| 1.3 * (-alpha * x[0] * x[0]).exp())
            .unwrap();
            let b = compute_deficit(&u);
            let lg = b.lambda_grad.unwrap();
            let lm = b.lambda_moment.unwrap();
            assert!((lg - lm).abs() <= 1e-8 * lm.abs(), "alpha={alpha}: {lg} vs {lm}");
            assert!((lm + 1.0 / (2.0 * alpha)).abs() <= 1e-6 / (2.0 * alpha));
        }
    }
}

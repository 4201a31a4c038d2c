//! The extremal cone `E = {c·e^{-α|x|²}}`, the L²-nearest-Gaussian
//! projection `v*(u)`, and the radial/spherical decomposition.
//!
//! For fixed width α the optimal amplitude is the Rayleigh quotient
//! `c(α) = ⟨u, g_α⟩ / ‖g_α‖²`, so the projection reduces to maximizing
//! `F(α) = ⟨u, g_α⟩² / ‖g_α‖²` over α > 0. A logarithmic grid locates the
//! candidate brackets and golden-section refines each; when two refined
//! candidates tie within the tolerance the smaller α wins, so results are
//! reproducible. Every evaluated `(α, F)` pair lands in `alpha_trace`.
//!
//! At a converged projection the transversality conditions
//! `⟨v*, u−v*⟩ = ⟨xv*, x(v*−u)⟩ = ⟨∇v*, ∇(v*−u)⟩ = 0` hold up to search and
//! discretization tolerance; the three residuals are reported.

use serde::Serialize;
use std::f64::consts::PI;

use crate::deficit::compute_deficit;
use crate::error::{Error, Result};
use crate::funcrep::{sphere_surface, Descriptor, SampledFunction};
use crate::hermite;

/// An element `c · e^{-α|x|²}` of the extremal cone.
///
/// All norms have closed forms, exact in floating point:
/// `‖v‖² = c²(π/2α)^{n/2}`, `‖xv‖² = c²·n/(4α)·(π/2α)^{n/2}`,
/// `‖∇v‖² = c²·nα·(π/2α)^{n/2}`, and the deficit vanishes identically.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianParams {
    pub dimension: usize,
    pub amplitude: f64,
    pub width: f64,
}

impl GaussianParams {
    pub fn new(dimension: usize, amplitude: f64, width: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidInput("dimension must be >= 1".into()));
        }
        if !amplitude.is_finite() || !width.is_finite() || (amplitude != 0.0 && width <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "invalid gaussian parameters c={amplitude}, alpha={width}"
            )));
        }
        Ok(GaussianParams {
            dimension,
            amplitude,
            width: if amplitude == 0.0 { width.max(1.0) } else { width },
        })
    }

    pub fn zero(dimension: usize) -> Self {
        GaussianParams {
            dimension,
            amplitude: 0.0,
            width: 1.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.amplitude == 0.0
    }

    fn base(&self) -> f64 {
        (PI / (2.0 * self.width)).powf(self.dimension as f64 / 2.0)
    }

    pub fn l2_sq(&self) -> f64 {
        self.amplitude * self.amplitude * self.base()
    }

    pub fn moment_sq(&self) -> f64 {
        self.l2_sq() * self.dimension as f64 / (4.0 * self.width)
    }

    pub fn grad_sq(&self) -> f64 {
        self.l2_sq() * self.dimension as f64 * self.width
    }

    pub fn deficit(&self) -> f64 {
        let n2 = (self.dimension * self.dimension) as f64;
        self.moment_sq() * self.grad_sq() - n2 / 4.0 * self.l2_sq() * self.l2_sq()
    }

    pub fn eval(&self, r_sq: f64) -> f64 {
        self.amplitude * (-self.width * r_sq).exp()
    }
}

/// Nearest-Gaussian projection output.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionResult {
    pub gaussian: GaussianParams,
    pub distance_sq: f64,
    /// `⟨v*, u−v*⟩`
    pub r0: f64,
    /// `⟨xv*, x(v*−u)⟩`
    pub r1: f64,
    /// `⟨∇v*, ∇(v*−u)⟩`
    pub r2: f64,
    pub alpha_trace: Vec<(f64, f64)>,
    pub is_zero: bool,
    /// `tol²·‖u‖²`, the threshold below which the projection is declared zero.
    pub zero_threshold: f64,
}

/// Search-range knobs for `project`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub grid_points: usize,
}

impl Default for ProjectConfig {
    fn default() -> Self {
        ProjectConfig {
            alpha_min: 1e-4,
            alpha_max: 1e4,
            grid_points: 200,
        }
    }
}

/// Sample `c·e^{-α|x|²}` on the target shape.
///
/// Hermite targets use the exact overlap coefficients instead of quadrature.
pub fn gaussian_eval(g: &GaussianParams, target: &Descriptor) -> Result<SampledFunction> {
    target.validate()?;
    if target.dimension() != g.dimension {
        return Err(Error::IncompatibleRepresentation(format!(
            "gaussian dimension {} vs target dimension {}",
            g.dimension,
            target.dimension()
        )));
    }
    if let Descriptor::Hermite { modes } = target {
        let mut c = gaussian_hermite_coeffs(g, *modes);
        c.truncate(*modes);
        c.resize(*modes, 0.0);
        return SampledFunction::hermite(c);
    }
    target.sample(|x| g.eval(x.iter().map(|v| v * v).sum()))
}

/// Hermite coefficients of a 1-D Gaussian, extended until the dropped tail is
/// below `1e-13` of its mass (the requested length is a lower bound).
pub(crate) fn gaussian_hermite_coeffs(g: &GaussianParams, min_modes: usize) -> Vec<f64> {
    if g.is_zero() {
        return vec![0.0; min_modes.max(1)];
    }
    let total = g.l2_sq();
    let mut modes = min_modes.max(8);
    loop {
        let t = hermite::gaussian_overlaps(g.width, modes - 1);
        let coeffs: Vec<f64> = t.iter().map(|v| g.amplitude * v).collect();
        let kept: f64 = coeffs.iter().map(|c| c * c).sum();
        if total - kept <= 1e-13 * total || modes >= 4096 {
            return coeffs;
        }
        modes *= 2;
    }
}

/// L²-nearest element of the extremal cone.
///
/// `tol` controls the golden-section bracket width (relative in α) and the
/// zero-projection threshold `tol²·‖u‖²`.
pub fn project(u: &SampledFunction, tol: f64) -> Result<ProjectionResult> {
    project_with(u, tol, &ProjectConfig::default())
}

pub fn project_with(
    u: &SampledFunction,
    tol: f64,
    config: &ProjectConfig,
) -> Result<ProjectionResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be > 0, got {tol}")));
    }
    if config.grid_points < 2 || !(config.alpha_min > 0.0 && config.alpha_max > config.alpha_min) {
        return Err(Error::InvalidConfig(format!(
            "bad projection search range {:?}",
            config
        )));
    }
    let n = u.dimension();
    let norm_sq = u.norm_l2_sq();
    let zero_threshold = tol * tol * norm_sq;
    if norm_sq == 0.0 {
        return Ok(ProjectionResult {
            gaussian: GaussianParams::zero(n),
            distance_sq: 0.0,
            r0: 0.0,
            r1: 0.0,
            r2: 0.0,
            alpha_trace: Vec::new(),
            is_zero: true,
            zero_threshold,
        });
    }

    let objective = Objective::new(u);
    let mut trace: Vec<(f64, f64)> = Vec::new();
    let m = config.grid_points;
    let log_lo = config.alpha_min.ln();
    let log_hi = config.alpha_max.ln();
    let grid: Vec<f64> = (0..m)
        .map(|i| (log_lo + (log_hi - log_lo) * i as f64 / (m - 1) as f64).exp())
        .collect();
    let scores: Vec<f64> = grid.iter().map(|&a| objective.f(a)).collect();
    trace.extend(grid.iter().copied().zip(scores.iter().copied()));

    // refine every local maximum of the coarse grid
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..m {
        let left_ok = i == 0 || scores[i] >= scores[i - 1];
        let right_ok = i + 1 == m || scores[i] >= scores[i + 1];
        if left_ok && right_ok {
            let lo = grid[i.saturating_sub(1)];
            let hi = grid[(i + 1).min(m - 1)];
            let (alpha, f) = golden_max(&objective, lo.max(config.alpha_min), hi, tol, &mut trace);
            candidates.push((alpha, f));
        }
    }
    let best_f = candidates
        .iter()
        .map(|c| c.1)
        .fold(f64::NEG_INFINITY, f64::max);
    // ties within tolerance resolve to the smaller width
    let (alpha, f_best) = candidates
        .iter()
        .filter(|c| (best_f - c.1).abs() <= tol * (1.0 + best_f.abs()))
        .fold((f64::INFINITY, best_f), |acc, c| {
            if c.0 < acc.0 {
                (c.0, c.1)
            } else {
                acc
            }
        });

    if f_best <= zero_threshold {
        return Ok(ProjectionResult {
            gaussian: GaussianParams::zero(n),
            distance_sq: norm_sq,
            r0: 0.0,
            r1: 0.0,
            r2: 0.0,
            alpha_trace: trace,
            is_zero: true,
            zero_threshold,
        });
    }

    let (s, g) = objective.overlap_gram(alpha);
    let amplitude = s / g;
    let gaussian = GaussianParams::new(n, amplitude, alpha)?;
    let distance_sq = (norm_sq - s * s / g).max(0.0);
    let (r0, r1, r2) = objective.residuals(&gaussian)?;
    Ok(ProjectionResult {
        gaussian,
        distance_sq,
        r0,
        r1,
        r2,
        alpha_trace: trace,
        is_zero: false,
        zero_threshold,
    })
}

enum Objective<'a> {
    Nodes {
        u: &'a SampledFunction,
        values: &'a [f64],
        r_sq: Vec<f64>,
        weights: Vec<f64>,
    },
    Hermite {
        u: &'a SampledFunction,
        coeffs: &'a [f64],
    },
}

impl<'a> Objective<'a> {
    fn new(u: &'a SampledFunction) -> Self {
        match u {
            SampledFunction::Hermite { coefficients } => Objective::Hermite {
                u,
                coeffs: coefficients,
            },
            SampledFunction::Grid1D { half_width, values } => {
                let n = values.len();
                let dx = 2.0 * half_width / n as f64;
                let r_sq = (0..n)
                    .map(|j| {
                        let x = -half_width + j as f64 * dx;
                        x * x
                    })
                    .collect();
                Objective::Nodes {
                    u,
                    values,
                    r_sq,
                    weights: vec![dx; n],
                }
            }
            SampledFunction::GridND {
                dimension,
                half_width,
                points_per_axis,
                values,
            } => {
                let np = *points_per_axis;
                let dx = 2.0 * half_width / np as f64;
                let cell = dx.powi(*dimension as i32);
                let axis: Vec<f64> = (0..np).map(|j| -half_width + j as f64 * dx).collect();
                let mut r_sq = Vec::with_capacity(values.len());
                for flat in 0..values.len() {
                    let mut rest = flat;
                    let mut acc = 0.0;
                    for _ in 0..*dimension {
                        let x = axis[rest % np];
                        rest /= np;
                        acc += x * x;
                    }
                    r_sq.push(acc);
                }
                Objective::Nodes {
                    u,
                    values,
                    r_sq,
                    weights: vec![cell; values.len()],
                }
            }
            SampledFunction::Radial {
                dimension,
                max_radius,
                values,
            } => {
                let n = values.len();
                let dr = max_radius / n as f64;
                let omega = sphere_surface(*dimension);
                let mut r_sq = Vec::with_capacity(n);
                let mut weights = Vec::with_capacity(n);
                for j in 0..n {
                    let r = (j as f64 + 0.5) * dr;
                    r_sq.push(r * r);
                    weights.push(omega * r.powi(*dimension as i32 - 1) * dr);
                }
                Objective::Nodes {
                    u,
                    values,
                    r_sq,
                    weights,
                }
            }
        }
    }

    /// `(⟨u, g_α⟩, ‖g_α⟩‖²)` for the unit-amplitude kernel.
    fn overlap_gram(&self, alpha: f64) -> (f64, f64) {
        match self {
            Objective::Nodes {
                values,
                r_sq,
                weights,
                ..
            } => {
                let mut s = 0.0;
                let mut g = 0.0;
                for i in 0..values.len() {
                    let e = (-alpha * r_sq[i]).exp();
                    s += values[i] * e * weights[i];
                    g += e * e * weights[i];
                }
                (s, g)
            }
            Objective::Hermite { coeffs, .. } => {
                let t = hermite::gaussian_overlaps(alpha, coeffs.len() - 1);
                let s = coeffs.iter().zip(t.iter()).map(|(c, t)| c * t).sum();
                (s, (PI / (2.0 * alpha)).sqrt())
            }
        }
    }

    fn f(&self, alpha: f64) -> f64 {
        let (s, g) = self.overlap_gram(alpha);
        let f = s * s / g;
        if f.is_finite() {
            f
        } else {
            0.0
        }
    }

    fn residuals(&self, gaussian: &GaussianParams) -> Result<(f64, f64, f64)> {
        match self {
            Objective::Nodes { u, .. } => {
                let v = gaussian_eval(gaussian, &u.descriptor())?;
                let r0 = v.inner(u)? - v.norm_l2_sq();
                let r1 = v.moment_sq() - v.inner_moment(u)?;
                let r2 = v.grad_norm_sq() - v.inner_grad(u)?;
                Ok((r0, r1, r2))
            }
            Objective::Hermite { coeffs, .. } => {
                // exact ladder pairings against the untruncated Gaussian
                let c = gaussian.amplitude;
                let alpha = gaussian.width;
                let xxu = hermite::apply_position(&hermite::apply_position(coeffs));
                let ddu = hermite::apply_derivative(&hermite::apply_derivative(coeffs));
                let t = hermite::gaussian_overlaps(alpha, xxu.len() - 1);
                let dot = |a: &[f64]| -> f64 { a.iter().zip(t.iter()).map(|(x, y)| x * y).sum() };
                let s = dot(coeffs);
                let r0 = c * s - gaussian.l2_sq();
                let r1 = gaussian.moment_sq() - c * dot(&xxu);
                let r2 = gaussian.grad_sq() + c * dot(&ddu);
                Ok((r0, r1, r2))
            }
        }
    }
}

fn golden_max(
    objective: &Objective,
    alpha_lo: f64,
    alpha_hi: f64,
    tol: f64,
    trace: &mut Vec<(f64, f64)>,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = alpha_lo.ln();
    let mut b = alpha_hi.ln();
    let width_goal = (1.0 + tol).ln();
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = objective.f(x1.exp());
    let mut f2 = objective.f(x2.exp());
    trace.push((x1.exp(), f1));
    trace.push((x2.exp(), f2));
    let mut iterations = 0;
    while b - a > width_goal && iterations < 200 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = objective.f(x1.exp());
            trace.push((x1.exp(), f1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = objective.f(x2.exp());
            trace.push((x2.exp(), f2));
        }
        iterations += 1;
    }
    if f1 > f2 {
        (x1.exp(), f1)
    } else {
        (x2.exp(), f2)
    }
}

/// Radial and spherical parts `u = u_r + u_s`.
#[derive(Debug, Clone)]
pub struct RadialSplit {
    pub u_r: SampledFunction,
    pub u_s: SampledFunction,
}

/// Angular samples per shell, per dimension (`64·n` by default).
pub const ANGULAR_SAMPLES_PER_DIM: usize = 64;

/// Orthogonal decomposition into radial (spherical average) and spherical
/// parts.
///
/// On `Grid1D` radial means even, so the split is the exact parity split; on
/// Hermite it keeps even-index coefficients; `Radial` inputs are their own
/// radial part. On `GridND` the spherical average is taken over `64·n`
/// interpolated samples per radius shell, then rescaled so that
/// `⟨u_s, u_r⟩ = 0` holds exactly in the discrete inner product.
pub fn radial_split(u: &SampledFunction) -> RadialSplit {
    match u {
        SampledFunction::Radial { .. } => RadialSplit {
            u_r: u.clone(),
            u_s: u.zeros_like(),
        },
        SampledFunction::Grid1D { values, .. } => {
            let n = values.len();
            let even: Vec<f64> = (0..n)
                .map(|j| 0.5 * (values[j] + values[(n - j) % n]))
                .collect();
            let odd: Vec<f64> = (0..n).map(|j| values[j] - even[j]).collect();
            RadialSplit {
                u_r: u.with_values(even).expect("finite"),
                u_s: u.with_values(odd).expect("finite"),
            }
        }
        SampledFunction::Hermite { coefficients } => {
            let even: Vec<f64> = coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 0 { *c } else { 0.0 })
                .collect();
            let odd: Vec<f64> = coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { *c } else { 0.0 })
                .collect();
            RadialSplit {
                u_r: u.with_values(even).expect("finite"),
                u_s: u.with_values(odd).expect("finite"),
            }
        }
        SampledFunction::GridND {
            dimension,
            half_width,
            points_per_axis,
            values,
        } => {
            let n = *points_per_axis;
            let dx = 2.0 * half_width / n as f64;
            let r_max = half_width * (*dimension as f64).sqrt();
            let shells = (r_max / dx).ceil() as usize + 1;
            let directions = unit_directions(*dimension, ANGULAR_SAMPLES_PER_DIM * dimension);
            let mut profile = vec![0.0; shells];
            for (m, p) in profile.iter_mut().enumerate() {
                let r = (m as f64 + 0.5) * dx;
                let mut acc = 0.0;
                let mut point = vec![0.0; *dimension];
                for dir in &directions {
                    for (pi, di) in point.iter_mut().zip(dir.iter()) {
                        *pi = r * di;
                    }
                    acc += crate::funcrep::cubic_eval_nd(
                        values,
                        *dimension,
                        n,
                        -half_width,
                        dx,
                        &point,
                    );
                }
                *p = acc / directions.len() as f64;
            }
            // evaluate the profile back on the grid
            let axis: Vec<f64> = (0..n).map(|j| -half_width + j as f64 * dx).collect();
            let mut tilde = vec![0.0; values.len()];
            for (flat, t) in tilde.iter_mut().enumerate() {
                let mut rest = flat;
                let mut r2 = 0.0;
                for _ in 0..*dimension {
                    let x = axis[rest % n];
                    rest /= n;
                    r2 += x * x;
                }
                let r = r2.sqrt();
                let pos = (r / dx - 0.5).max(0.0);
                let m = pos.floor() as usize;
                if m + 1 < shells {
                    let s = pos - m as f64;
                    *t = (1.0 - s) * profile[m] + s * profile[m + 1];
                } else if m < shells {
                    *t = profile[m];
                }
            }
            // one exact orthogonalization: scale so <u - u_r, u_r> = 0
            let tilde_fn = u.with_values(tilde).expect("finite");
            let gram = tilde_fn.norm_l2_sq();
            let u_r = if gram > 0.0 {
                let scale = u.inner(&tilde_fn).expect("same grid") / gram;
                tilde_fn.scale(scale).expect("finite")
            } else {
                u.zeros_like()
            };
            let u_s = SampledFunction::linear_combination(1.0, u, -1.0, &u_r).expect("same grid");
            RadialSplit { u_r, u_s }
        }
    }
}

/// Quasi-uniform unit directions: uniform angles on the circle, a Fibonacci
/// lattice on the sphere.
fn unit_directions(dimension: usize, count: usize) -> Vec<Vec<f64>> {
    match dimension {
        2 => (0..count)
            .map(|i| {
                let theta = 2.0 * PI * (i as f64 + 0.5) / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        3 => {
            let golden = PI * (3.0 - 5.0f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).max(0.0).sqrt();
                    let theta = golden * i as f64;
                    vec![rho * theta.cos(), rho * theta.sin(), z]
                })
                .collect()
        }
        _ => unreachable!("GridND is restricted to n in {{2, 3}}"),
    }
}

/// True when `u - v*` takes values of both signs on the sample set.
///
/// Errors with `NotApplicable` when `u` is already in the cone.
pub fn sign_change_check(u: &SampledFunction, p: &ProjectionResult) -> Result<bool> {
    let norm_sq = u.norm_l2_sq();
    if p.distance_sq <= 1e-10 * (1.0 + norm_sq) {
        return Err(Error::NotApplicable(
            "u is an extremal within tolerance; u - v* has no sign to check".into(),
        ));
    }
    let diff = match u {
        SampledFunction::Hermite { coefficients } => {
            let k = coefficients.len() - 1;
            let half_width = ((2.0 * k as f64 + 1.0).sqrt() + 8.0).max(16.0);
            let n = 2048;
            let dx = 2.0 * half_width / n as f64;
            (0..n)
                .map(|j| {
                    let x = -half_width + j as f64 * dx;
                    hermite::eval_series(coefficients, x) - p.gaussian.eval(x * x)
                })
                .collect::<Vec<f64>>()
        }
        _ => {
            let v = gaussian_eval(&p.gaussian, &u.descriptor())?;
            u.raw()
                .iter()
                .zip(v.raw().iter())
                .map(|(a, b)| a - b)
                .collect()
        }
    };
    let max = diff.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = diff.iter().cloned().fold(f64::INFINITY, f64::min);
    let tol_sign = 1e-8 * max.abs().max(min.abs());
    Ok(min < -tol_sign && max > tol_sign)
}

/// Verify that `c·g` stays in the cone: the closed-form deficit vanishes and
/// a sampled projection recovers the scaled parameters.
pub fn cone_check(g: &GaussianParams, c: f64) -> Result<bool> {
    let scaled = GaussianParams::new(g.dimension, c * g.amplitude, g.width)?;
    let budget = 1e-12 * (1.0 + scaled.moment_sq() * scaled.grad_sq());
    if scaled.deficit().abs() > budget {
        return Ok(false);
    }
    if scaled.is_zero() {
        return Ok(true);
    }
    let half_width = (46.0 / scaled.width).sqrt().max(10.0);
    let target = if g.dimension == 1 {
        Descriptor::Grid1D {
            half_width,
            point_count: 4096,
        }
    } else {
        Descriptor::Radial {
            dimension: g.dimension,
            max_radius: half_width,
            point_count: 4096,
        }
    };
    let sampled = gaussian_eval(&scaled, &target)?;
    let proj = project(&sampled, 1e-9)?;
    let amp_ok =
        (proj.gaussian.amplitude - scaled.amplitude).abs() <= 1e-6 * (1.0 + scaled.amplitude.abs());
    let width_ok = (proj.gaussian.width - scaled.width).abs() <= 1e-6 * scaled.width;
    let dist_ok = proj.distance_sq <= 1e-8 * (1.0 + scaled.l2_sq());
    Ok(amp_ok && width_ok && dist_ok)
}

/// `v*` represented on the shape of `u` (Hermite targets get enough modes to
/// keep the truncated tail below 1e-13 of the Gaussian mass).
pub fn gaussian_on(u: &SampledFunction, g: &GaussianParams) -> Result<SampledFunction> {
    if g.is_zero() {
        return Ok(u.zeros_like());
    }
    match u {
        SampledFunction::Hermite { coefficients } => {
            SampledFunction::hermite(gaussian_hermite_coeffs(g, coefficients.len()))
        }
        _ => gaussian_eval(g, &u.descriptor()),
    }
}

/// Deficit computed on whatever representation `u` uses; here to keep
/// projection callers from re-importing the deficit module for one number.
pub fn deficit_of(u: &SampledFunction) -> f64 {
    compute_deficit(u).deficit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcrep::Descriptor;

    fn hermite_mode(k: usize) -> SampledFunction {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        SampledFunction::hermite(c).unwrap()
    }

    fn perturbed_ground_state() -> SampledFunction {
        let s = 1.09f64.sqrt();
        SampledFunction::hermite(vec![1.0 / s, 0.0, 0.0, 0.0, 0.3 / s]).unwrap()
    }

    /// Independent brute-force oracle: dense search over (c, alpha).
    fn brute_force_distance(u: &SampledFunction) -> f64 {
        let norm_sq = u.norm_l2_sq();
        let mut best = norm_sq;
        for ia in 0..400 {
            let alpha = 0.2 + ia as f64 * (1.2 - 0.2) / 399.0;
            let g = gaussian_on(u, &GaussianParams::new(1, 1.0, alpha).unwrap()).unwrap();
            let s = u.inner(&g).unwrap();
            let gg = g.norm_l2_sq();
            for ic in 0..400 {
                let c = 0.3 + ic as f64 * (1.5 - 0.3) / 399.0;
                let d = norm_sq - 2.0 * c * s + c * c * gg;
                if d < best {
                    best = d;
                }
            }
        }
        best
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let g = GaussianParams::new(1, 0.7, 0.8).unwrap();
        let sampled = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .unwrap();
        assert!((sampled.norm_l2_sq() - g.l2_sq()).abs() < 1e-10);
        assert!((sampled.moment_sq() - g.moment_sq()).abs() < 1e-10);
        assert!((sampled.grad_norm_sq() - g.grad_sq()).abs() < 1e-8);
    }

    #[test]
    fn unit_amplitude_gaussian_has_unit_norm() {
        let g = GaussianParams::new(1, std::f64::consts::PI.powf(-0.25), 0.5).unwrap();
        let sampled = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 1024,
            },
        )
        .unwrap();
        assert!((sampled.norm_l2_sq() - 1.0).abs() < 1e-10);
        assert!(deficit_of(&sampled).abs() < 1e-8);
    }

    #[test]
    fn zero_amplitude_samples_to_zero() {
        let g = GaussianParams::new(1, 0.0, 1.0).unwrap();
        let sampled = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 64,
            },
        )
        .unwrap();
        assert_eq!(sampled.norm_l2_sq(), 0.0);
    }

    #[test]
    fn projection_recovers_a_sampled_gaussian() {
        let g = GaussianParams::new(1, 1.4, 2.3).unwrap();
        let sampled = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 10.0,
                point_count: 2048,
            },
        )
        .unwrap();
        let p = project(&sampled, 1e-9).unwrap();
        assert!(!p.is_zero);
        assert!((p.gaussian.amplitude - 1.4).abs() < 1e-6 * 1.4);
        assert!((p.gaussian.width - 2.3).abs() < 1e-6 * 2.3);
        assert!(p.distance_sq < 1e-10);
    }

    #[test]
    fn odd_functions_project_to_zero() {
        let u = hermite_mode(1);
        let p = project(&u, 1e-9).unwrap();
        assert!(p.is_zero);
        assert!((p.distance_sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perturbed_ground_state_distance_matches_brute_force() {
        let u = perturbed_ground_state();
        let p = project(&u, 1e-10).unwrap();
        let expect = 0.09 / 1.09;
        assert!(
            (p.distance_sq - expect).abs() < 1e-8,
            "distance_sq = {} vs {expect}",
            p.distance_sq
        );
        let oracle = brute_force_distance(&u);
        assert!(
            (p.distance_sq - oracle).abs() < 5e-5,
            "{} vs oracle {}",
            p.distance_sq,
            oracle
        );
        // the width tilt gains nothing for an h4 perturbation
        assert!((p.gaussian.width - 0.5).abs() < 1e-6);
    }

    #[test]
    fn transversality_residuals_are_small() {
        for u in [
            perturbed_ground_state(),
            hermite_mode(2),
            SampledFunction::hermite(vec![0.9, 0.1, 0.2, 0.05]).unwrap(),
        ] {
            let p = project(&u, 1e-10).unwrap();
            let b = compute_deficit(&u);
            let budget = 1e-6 * (1.0 + b.delta_norm * b.delta_norm);
            assert!(p.r0.abs() <= budget, "r0 = {}", p.r0);
            assert!(p.r1.abs() <= budget, "r1 = {}", p.r1);
            assert!(p.r2.abs() <= budget, "r2 = {}", p.r2);
        }
    }

    #[test]
    fn projection_is_equivariant_under_scaling() {
        let u = perturbed_ground_state();
        let p1 = project(&u, 1e-9).unwrap();
        let p2 = project(&u.scale(2.0).unwrap(), 1e-9).unwrap();
        assert!((p2.gaussian.amplitude - 2.0 * p1.gaussian.amplitude).abs() < 1e-6);
        assert!((p2.gaussian.width - p1.gaussian.width).abs() < 1e-9);
    }

    #[test]
    fn parity_split_on_grid_is_exact() {
        let u = Descriptor::Grid1D {
            half_width: 12.0,
            point_count: 1024,
        }
        .sample(|x| (x[0] + 0.7) * (-0.5 * x[0] * x[0]).exp())
        .unwrap();
        let split = radial_split(&u);
        let cross = split.u_r.inner(&split.u_s).unwrap();
        assert!(cross.abs() < 1e-14);
        let total = split.u_r.norm_l2_sq() + split.u_s.norm_l2_sq();
        assert!((total - u.norm_l2_sq()).abs() < 1e-12);
    }

    #[test]
    fn hermite_split_by_parity_of_index() {
        let u = SampledFunction::hermite(vec![1.0, 1.0]).unwrap();
        let split = radial_split(&u);
        assert!((split.u_r.norm_l2_sq() - 1.0).abs() < 1e-15);
        assert!((split.u_s.norm_l2_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn radial_representation_is_its_own_radial_part() {
        let u = Descriptor::Radial {
            dimension: 3,
            max_radius: 10.0,
            point_count: 256,
        }
        .sample(|x| (-x[0] * x[0]).exp())
        .unwrap();
        let split = radial_split(&u);
        assert_eq!(split.u_s.norm_l2_sq(), 0.0);
    }

    #[test]
    fn grid_nd_split_orthogonality_is_exact() {
        let u = Descriptor::GridND {
            dimension: 2,
            half_width: 8.0,
            point_count: 64,
        }
        .sample(|x| (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp() * (1.0 + 0.4 * x[0]))
        .unwrap();
        let split = radial_split(&u);
        let cross = split.u_r.inner(&split.u_s).unwrap();
        assert!(cross.abs() < 1e-12, "cross = {cross}");
        let total = split.u_r.norm_l2_sq() + split.u_s.norm_l2_sq();
        assert!((total - u.norm_l2_sq()).abs() <= 1e-8 * u.norm_l2_sq());
    }

    #[test]
    fn sign_change_holds_off_the_cone() {
        let u = perturbed_ground_state();
        let p = project(&u, 1e-9).unwrap();
        assert!(sign_change_check(&u, &p).unwrap());

        let odd = hermite_mode(1);
        let p_odd = project(&odd, 1e-9).unwrap();
        assert!(sign_change_check(&odd, &p_odd).unwrap());
    }

    #[test]
    fn sign_change_is_not_applicable_on_the_cone() {
        let g = GaussianParams::new(1, 1.0, 0.7).unwrap();
        let u = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .unwrap();
        let p = project(&u, 1e-9).unwrap();
        assert!(matches!(
            sign_change_check(&u, &p),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn cone_is_closed_under_scaling() {
        let g = GaussianParams::new(1, 0.9, 1.7).unwrap();
        assert!(cone_check(&g, 0.0).unwrap());
        assert!(cone_check(&g, -2.0).unwrap());
        assert!(cone_check(&g, 3.0).unwrap());
    }

    #[test]
    fn norm_domination_and_sandwich() {
        let u = perturbed_ground_state();
        let p = project(&u, 1e-9).unwrap();
        let v = gaussian_on(&u, &p.gaussian).unwrap();
        assert!(v.norm_l2_sq().sqrt() <= u.norm_l2_sq().sqrt() + 1e-8);
        assert!(v.moment_sq().sqrt() <= u.moment_sq().sqrt() + 1e-8);
        assert!(v.grad_norm_sq().sqrt() <= u.grad_norm_sq().sqrt() + 1e-8);
        let split = radial_split(&u);
        let dist = p.distance_sq.sqrt();
        assert!(split.u_s.norm_l2_sq().sqrt() <= dist + 1e-8);
        assert!(dist <= u.norm_l2_sq().sqrt() + 1e-8);
    }

    #[test]
    fn projection_of_zero_is_zero() {
        let z = SampledFunction::hermite(vec![0.0, 0.0]).unwrap();
        let p = project(&z, 1e-9).unwrap();
        assert!(p.is_zero);
        assert_eq!(p.distance_sq, 0.0);
    }

    #[test]
    fn radial_reduction_agrees_on_exact_splits() {
        let u = SampledFunction::hermite(vec![0.8, 0.4, 0.3, 0.1, 0.2]).unwrap();
        let split = radial_split(&u);
        let p_full = project(&u, 1e-10).unwrap();
        let p_radial = project(&split.u_r, 1e-10).unwrap();
        assert!((p_full.gaussian.width - p_radial.gaussian.width).abs() < 1e-6);
        assert!((p_full.gaussian.amplitude - p_radial.gaussian.amplitude).abs() < 1e-6);
    }
}

//! Empirical stability scans: the deficit-to-distance ratio, the
//! second-variation chain, and the sharpness (no-improvement) curve.
//!
//! For normalized `u` outside the extremal cone, with `v* = v*(u)`,
//! `w = v* − u` and `ŵ = w/‖w‖`, the orthogonality conditions at `v*` kill
//! the first and third variation terms, leaving the exact decomposition
//!
//! ```text
//! δ(u) = ‖w‖² δ''(v*)(ŵ) + ‖w‖⁴ δ(ŵ)
//! ```
//!
//! and the AM-GM chain gives the computable lower bound
//!
//! ```text
//! δ''(v*)(w) ≥ (n²/2) ‖v*‖² ‖w‖² (√(1 + 4δ(ŵ)/n²) − 1) > 0   (u_r ≢ 0).
//! ```
//!
//! The n²/2 factor is what the chain derivation yields; records carry the
//! n/2 variant alongside it for n ≥ 2 so the two can be compared, not
//! asserted. Scan ratios are empirical per-family minima and are labeled as
//! such; no universal constant is claimed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::deficit::{compute_deficit, variation_terms};
use crate::error::{Error, Result};
use crate::funcrep::{Descriptor, SampledFunction};
use crate::gaussfit::{gaussian_on, project, radial_split};

const PROJECT_TOL: f64 = 1e-9;
const IN_CONE_THRESHOLD: f64 = 1e-10;

/// One scanned function with every quantity of the main inequality chain.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityRecord {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
    pub deficit: f64,
    pub distance_sq: f64,
    /// `deficit / distance_sq` for normalized input — the empirical
    /// stability-constant sample.
    pub ratio: f64,
    /// `δ''(v*)(v* − u)`
    pub d2_at_vstar: f64,
    /// `(n²/2)·‖v*‖²·‖w‖²·(√(1 + 4 d_hat/n²) − 1)`
    pub chain_lower: f64,
    /// Same chain with the n/2 factor, reported for comparison when n ≥ 2.
    pub chain_lower_paper_variant: Option<f64>,
    /// `δ(ŵ)` for the normalized difference direction.
    pub d_hat: f64,
    /// Relative residual of the exact decomposition identity.
    pub decomp_residual: f64,
    pub vstar_l2: f64,
    /// `‖u_r‖²`
    pub radial_mass: f64,
    pub is_zero_projection: bool,
}

/// Deficit, projection, and decomposition data for one normalized function.
pub fn stability_record(u: &SampledFunction) -> Result<StabilityRecord> {
    let norm = u.norm_l2_sq().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "stability records need a normalized function, got norm {norm}"
        )));
    }
    let n = u.dimension();
    let proj = project(u, PROJECT_TOL)?;
    if !proj.is_zero && proj.distance_sq <= IN_CONE_THRESHOLD {
        return Err(Error::DegenerateInput(
            "u lies in the extremal cone; the stability ratio is 0/0".into(),
        ));
    }
    let breakdown = compute_deficit(u);
    let v = gaussian_on(u, &proj.gaussian)?;
    let w = SampledFunction::linear_combination(1.0, &v, -1.0, u)?;
    let w_sq = w.norm_l2_sq();
    let d_w = compute_deficit(&w).deficit;
    let d_hat = if w_sq > 0.0 { d_w / (w_sq * w_sq) } else { 0.0 };
    let d2 = variation_terms(&v, &w)?.d2;
    let decomp_residual =
        (breakdown.deficit - (d2 + d_w)).abs() / (1.0 + breakdown.deficit.abs());
    let vstar_l2_sq = proj.gaussian.l2_sq();
    let n2 = (n * n) as f64;
    let chain_shape = (1.0 + 4.0 * d_hat / n2).sqrt() - 1.0;
    let split = radial_split(u);
    Ok(StabilityRecord {
        family: String::new(),
        parameters: BTreeMap::new(),
        deficit: breakdown.deficit,
        distance_sq: proj.distance_sq,
        ratio: breakdown.deficit / proj.distance_sq,
        d2_at_vstar: d2,
        chain_lower: n2 / 2.0 * vstar_l2_sq * w_sq * chain_shape,
        chain_lower_paper_variant: if n >= 2 {
            Some(n as f64 / 2.0 * vstar_l2_sq * w_sq * chain_shape)
        } else {
            None
        },
        d_hat,
        decomp_residual,
        vstar_l2: vstar_l2_sq.sqrt(),
        radial_mass: split.u_r.norm_l2_sq(),
        is_zero_projection: proj.is_zero,
    })
}

/// `δ''(v*)(v* − u)` and its chain lower bound.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SecondVariation {
    pub value: f64,
    pub lower_bound: f64,
}

/// Positivity of the second variation at the nearest extremal.
///
/// Applicable only off the cone and with nonvanishing radial part; the
/// returned value is checked against the chain bound and against zero.
pub fn second_variation_positivity(u: &SampledFunction) -> Result<SecondVariation> {
    let proj = project(u, PROJECT_TOL)?;
    let norm_sq = u.norm_l2_sq();
    if proj.distance_sq <= IN_CONE_THRESHOLD * (1.0 + norm_sq) {
        return Err(Error::NotApplicable("u lies in the extremal cone".into()));
    }
    let split = radial_split(u);
    if split.u_r.norm_l2_sq() <= 1e-10 * norm_sq || proj.is_zero {
        return Err(Error::NotApplicable(
            "the radial part vanishes; the positivity lemma does not apply".into(),
        ));
    }
    let n2 = (u.dimension() * u.dimension()) as f64;
    let v = gaussian_on(u, &proj.gaussian)?;
    let w = SampledFunction::linear_combination(1.0, &v, -1.0, u)?;
    let w_sq = w.norm_l2_sq();
    let d_w = compute_deficit(&w).deficit;
    let d_hat = d_w / (w_sq * w_sq);
    let value = variation_terms(&v, &w)?.d2;
    let lower_bound =
        n2 / 2.0 * proj.gaussian.l2_sq() * w_sq * ((1.0 + 4.0 * d_hat / n2).sqrt() - 1.0);
    if value <= 0.0 {
        return Err(Error::InvariantViolation(format!(
            "second variation {value} is not positive"
        )));
    }
    if value < lower_bound - 1e-6 {
        return Err(Error::InvariantViolation(format!(
            "second variation {value} fell below its chain bound {lower_bound}"
        )));
    }
    Ok(SecondVariation { value, lower_bound })
}

/// Scan families. Parameter grids are explicit so scans are reproducible.
#[derive(Debug, Clone, Serialize)]
pub enum Family {
    /// Pure odd Hermite modes: spherical in n = 1, so v* = 0.
    OddOnly { modes: Vec<usize> },
    /// `u ∝ h_0 + ε h_k`, one perturbing mode at a time.
    HermitePerturbation { modes: Vec<usize>, epsilons: Vec<f64> },
    /// `c₁ g(x−a) + c₂ g(x+a)` — the dichotomy-like family.
    TwoBump {
        width: f64,
        amplitudes: (f64, f64),
        separations: Vec<f64>,
    },
    /// Seeded random Hermite series with decaying coefficient envelope.
    RandomHermite {
        max_mode: usize,
        count: usize,
        seed: u64,
    },
    /// `(1 + ε r^{2j}) e^{-r²/2}` on the radial representation, n ≥ 2.
    RadialPerturbation {
        dimension: usize,
        powers: Vec<u32>,
        epsilons: Vec<f64>,
    },
    /// `e^{-w(r−a)²} + e^{-w(r+a)²}` shells, n ≥ 2.
    RadialShell {
        dimension: usize,
        width: f64,
        separations: Vec<f64>,
    },
}

impl Family {
    pub fn id(&self) -> &'static str {
        match self {
            Family::OddOnly { .. } => "odd-only",
            Family::HermitePerturbation { .. } => "hermite-perturbation",
            Family::TwoBump { .. } => "two-bump",
            Family::RandomHermite { .. } => "random-hermite",
            Family::RadialPerturbation { .. } => "radial-perturbation",
            Family::RadialShell { .. } => "radial-shell",
        }
    }

    /// All parameter points with their normalized functions.
    pub fn points(&self) -> Result<Vec<(BTreeMap<String, f64>, SampledFunction)>> {
        let mut out = Vec::new();
        match self {
            Family::OddOnly { modes } => {
                for &k in modes {
                    if k % 2 == 0 {
                        return Err(Error::InvalidConfig(format!(
                            "odd-only family got even mode {k}"
                        )));
                    }
                    let mut c = vec![0.0; k + 1];
                    c[k] = 1.0;
                    out.push((
                        params(&[("mode", k as f64)]),
                        SampledFunction::hermite(c)?,
                    ));
                }
            }
            Family::HermitePerturbation { modes, epsilons } => {
                for &k in modes {
                    for &eps in epsilons {
                        if eps == 0.0 {
                            return Err(Error::InvalidConfig(
                                "epsilon 0 puts the function on the cone".into(),
                            ));
                        }
                        let mut c = vec![0.0; k.max(1) + 1];
                        let norm = (1.0 + eps * eps).sqrt();
                        c[0] = 1.0 / norm;
                        c[k] += eps / norm;
                        out.push((
                            params(&[("mode", k as f64), ("epsilon", eps)]),
                            SampledFunction::hermite(c)?,
                        ));
                    }
                }
            }
            Family::TwoBump {
                width,
                amplitudes,
                separations,
            } => {
                let (c1, c2) = *amplitudes;
                for &a in separations {
                    let half_width = (a + 10.0 / width.sqrt()).max(12.0);
                    let u = Descriptor::Grid1D {
                        half_width,
                        point_count: 4096,
                    }
                    .sample(|x| {
                        let d1 = x[0] - a;
                        let d2 = x[0] + a;
                        c1 * (-width * d1 * d1).exp() + c2 * (-width * d2 * d2).exp()
                    })?
                    .normalized()?;
                    out.push((
                        params(&[
                            ("separation", a),
                            ("width", *width),
                            ("c1", c1),
                            ("c2", c2),
                        ]),
                        u,
                    ));
                }
            }
            Family::RandomHermite {
                max_mode,
                count,
                seed,
            } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for draw in 0..*count {
                    let c: Vec<f64> = (0..=*max_mode)
                        .map(|k| rng.random_range(-1.0..1.0) / (1.0 + k as f64))
                        .collect();
                    let u = SampledFunction::hermite(c)?.normalized()?;
                    out.push((params(&[("draw", draw as f64), ("seed", *seed as f64)]), u));
                }
            }
            Family::RadialPerturbation {
                dimension,
                powers,
                epsilons,
            } => {
                for &j in powers {
                    for &eps in epsilons {
                        let u = Descriptor::Radial {
                            dimension: *dimension,
                            max_radius: 12.0,
                            point_count: 2048,
                        }
                        .sample(|x| {
                            let r2 = x[0] * x[0];
                            (1.0 + eps * r2.powi(j as i32)) * (-0.5 * r2).exp()
                        })?
                        .normalized()?;
                        out.push((
                            params(&[
                                ("power", j as f64),
                                ("epsilon", eps),
                                ("dimension", *dimension as f64),
                            ]),
                            u,
                        ));
                    }
                }
            }
            Family::RadialShell {
                dimension,
                width,
                separations,
            } => {
                for &a in separations {
                    let max_radius = (a + 10.0 / width.sqrt()).max(12.0);
                    let u = Descriptor::Radial {
                        dimension: *dimension,
                        max_radius,
                        point_count: 2048,
                    }
                    .sample(|x| {
                        let d1 = x[0] - a;
                        let d2 = x[0] + a;
                        (-width * d1 * d1).exp() + (-width * d2 * d2).exp()
                    })?
                    .normalized()?;
                    out.push((
                        params(&[
                            ("separation", a),
                            ("width", *width),
                            ("dimension", *dimension as f64),
                        ]),
                        u,
                    ));
                }
            }
        }
        Ok(out)
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Family-level scan summary. The minimum ratio is an empirical lower-bound
/// sample, not a certified constant.
#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub family: String,
    pub count: usize,
    pub min_ratio: f64,
    pub argmin: BTreeMap<String, f64>,
    pub max_decomp_residual: f64,
    /// Minimum `‖v*‖` among records with radial mass ≥ 1/2 — empirical
    /// evidence for the lower bound on `‖v*‖` under large radial part.
    pub min_vstar_radial_heavy: Option<f64>,
}

/// Run `stability_record` over every point of the family.
pub fn ratio_scan(family: &Family) -> Result<(Vec<StabilityRecord>, ScanSummary)> {
    let points = family.points()?;
    if points.is_empty() {
        return Err(Error::InvalidInput("empty parameter grid".into()));
    }
    let id = family.id();
    let records: Vec<Result<StabilityRecord>> = parallel_map(&points, |(p, u)| {
        stability_record(u).map(|mut r| {
            r.family = id.to_string();
            r.parameters = p.clone();
            r
        })
    });
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        out.push(r?);
    }
    let mut min_ratio = f64::INFINITY;
    let mut argmin = BTreeMap::new();
    let mut max_residual: f64 = 0.0;
    let mut min_vstar: Option<f64> = None;
    for r in &out {
        if r.ratio < min_ratio {
            min_ratio = r.ratio;
            argmin = r.parameters.clone();
        }
        max_residual = max_residual.max(r.decomp_residual);
        if r.radial_mass >= 0.5 {
            min_vstar = Some(min_vstar.map_or(r.vstar_l2, |m: f64| m.min(r.vstar_l2)));
        }
    }
    let summary = ScanSummary {
        family: id.to_string(),
        count: out.len(),
        min_ratio,
        argmin,
        max_decomp_residual: max_residual,
        min_vstar_radial_heavy: min_vstar,
    };
    Ok((out, summary))
}

/// `(λ, Q(λ))` with `Q(λ) = δ(Φ_λu) / ‖Φ_λ(u − v*)‖²_δ-style denominator`.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessCurve {
    pub points: Vec<(f64, f64)>,
    /// Max closed-form L² distance between `v*(Φ_λu)` from a fresh projection
    /// and `Φ_λ v*(u)`, over the validated λ.
    pub equivariance_l2: f64,
}

/// The quotient that Proposition-style sharpness says cannot be bounded
/// below: δ is dilation invariant while the denominator grows like λ².
pub fn sharpness_curve(u: &SampledFunction, lambda_grid: &[f64]) -> Result<SharpnessCurve> {
    if lambda_grid.is_empty() {
        return Err(Error::InvalidInput("empty lambda grid".into()));
    }
    if let Some(bad) = lambda_grid.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::InvalidInput(format!("lambda must be positive, got {bad}")));
    }
    let norm = u.norm_l2_sq().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidInput(format!(
            "sharpness curves need a normalized function, got norm {norm}"
        )));
    }
    let proj = project(u, PROJECT_TOL)?;
    if !proj.is_zero && proj.distance_sq <= IN_CONE_THRESHOLD {
        return Err(Error::DegenerateInput("u lies in the extremal cone".into()));
    }
    let breakdown = compute_deficit(u);
    let v = gaussian_on(u, &proj.gaussian)?;
    let w = SampledFunction::linear_combination(1.0, u, -1.0, &v)?;
    let w_sq = w.norm_l2_sq();
    let w_grad = w.grad_norm_sq();
    let w_moment = w.moment_sq();
    // dilation acts exactly on the three norms, so Q(λ) follows in closed form
    let points: Vec<(f64, f64)> = lambda_grid
        .iter()
        .map(|&l| {
            (
                l,
                breakdown.deficit / (w_sq + l * l * w_grad + w_moment / (l * l)),
            )
        })
        .collect();

    // validate v*(Φ_λ u) = Φ_λ v*(u) against fresh projections at the ends
    let mut equivariance_l2: f64 = 0.0;
    if !proj.is_zero {
        let n = u.dimension();
        let grid_u = match u {
            SampledFunction::Hermite { coefficients } => {
                let k = coefficients.len() - 1;
                let half_width = ((2.0 * k as f64 + 1.0).sqrt() + 8.0).max(16.0);
                u.resample(&Descriptor::Grid1D {
                    half_width,
                    point_count: 4096,
                })?
            }
            _ => u.clone(),
        };
        let first = *lambda_grid.first().expect("nonempty");
        let last = *lambda_grid.last().expect("nonempty");
        for lambda in [first, last] {
            let dilated = crate::deficit::dilate(&grid_u, crate::deficit::DilationFactor::new(lambda)?)?;
            let fresh = project(&dilated, PROJECT_TOL)?;
            let expected = crate::gaussfit::GaussianParams::new(
                n,
                proj.gaussian.amplitude * lambda.powf(n as f64 / 2.0),
                proj.gaussian.width * lambda * lambda,
            )?;
            equivariance_l2 = equivariance_l2.max(gaussian_l2_distance(&fresh.gaussian, &expected));
        }
    }
    Ok(SharpnessCurve {
        points,
        equivariance_l2,
    })
}

/// Closed-form `‖c₁ g_{α₁} − c₂ g_{α₂}‖_{L²}`.
fn gaussian_l2_distance(a: &crate::gaussfit::GaussianParams, b: &crate::gaussfit::GaussianParams) -> f64 {
    let n = a.dimension as f64;
    let cross = (std::f64::consts::PI / (a.width + b.width)).powf(n / 2.0);
    (a.l2_sq() + b.l2_sq() - 2.0 * a.amplitude * b.amplitude * cross)
        .max(0.0)
        .sqrt()
}

/// Margin of the sharpened inequality at candidate constants `(c1, c4)`:
/// `‖xu‖²‖∇u‖² − (n²/4)‖u‖⁴ − c1‖u‖²‖u−v*‖² − c4‖u−v*‖⁴`.
pub fn sharpened_inequality_check(u: &SampledFunction, c1: f64, c4: f64) -> Result<f64> {
    let b = compute_deficit(u);
    let proj = project(u, PROJECT_TOL)?;
    let d2 = proj.distance_sq;
    let n2 = (u.dimension() * u.dimension()) as f64;
    Ok(b.moment_sq * b.grad_sq
        - (n2 / 4.0 * b.l2_sq * b.l2_sq + c1 * b.l2_sq * d2 + c4 * d2 * d2))
}

/// Largest `c1` passing on a record set for each candidate `c4`.
pub fn sharpened_constant_search(
    records: &[StabilityRecord],
    c4_candidates: &[f64],
) -> Vec<(f64, f64)> {
    c4_candidates
        .iter()
        .map(|&c4| {
            let c1 = records
                .iter()
                .map(|r| (r.deficit - c4 * r.distance_sq * r.distance_sq) / r.distance_sq)
                .fold(f64::INFINITY, f64::min);
            (c4, c1)
        })
        .collect()
}

/// Worker cap: `UNCLAB_THREADS` when set, otherwise the machine parallelism.
pub(crate) fn thread_cap() -> usize {
    std::env::var("UNCLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Order-preserving parallel map over independent work items.
pub(crate) fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> R + Sync,
) -> Vec<R> {
    let n = items.len();
    let workers = thread_cap().min(n.max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut results: Vec<Option<R>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for _ in 0..workers {
            let next = &next;
            let f = &f;
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= n {
                        break;
                    }
                    local.push((i, f(&items[i])));
                }
                local
            }));
        }
        for handle in handles {
            for (i, r) in handle.join().expect("scan worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    results.into_iter().map(|r| r.expect("index covered")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hermite_mode(k: usize) -> SampledFunction {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        SampledFunction::hermite(c).unwrap()
    }

    fn perturbed(eps: f64, mode: usize) -> SampledFunction {
        let norm = (1.0 + eps * eps).sqrt();
        let mut c = vec![0.0; mode + 1];
        c[0] = 1.0 / norm;
        c[mode] = eps / norm;
        SampledFunction::hermite(c).unwrap()
    }

    #[test]
    fn odd_mode_record() {
        let r = stability_record(&hermite_mode(1)).unwrap();
        assert!(r.is_zero_projection);
        assert!((r.distance_sq - 1.0).abs() < 1e-12);
        assert!((r.deficit - 2.0).abs() < 1e-12);
        assert!((r.ratio - 2.0).abs() < 1e-12);
        assert!(r.decomp_residual < 1e-10);
    }

    #[test]
    fn perturbation_ratio_is_near_four() {
        let r = stability_record(&perturbed(0.1, 4)).unwrap();
        assert!(
            (r.ratio - 4.0).abs() < 0.4,
            "ratio = {} should be within 10% of 4",
            r.ratio
        );
        assert!(r.decomp_residual < 1e-6);
    }

    #[test]
    fn even_modes_have_nonzero_projection() {
        let r = stability_record(&hermite_mode(2)).unwrap();
        assert!(!r.is_zero_projection);
        assert!(r.vstar_l2 > 0.0);
    }

    #[test]
    fn gaussian_input_is_degenerate() {
        let g = crate::gaussfit::GaussianParams::new(1, std::f64::consts::PI.powf(-0.25), 0.5)
            .unwrap();
        let u = crate::gaussfit::gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .unwrap();
        assert!(matches!(
            stability_record(&u),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn second_variation_positive_for_perturbed_ground_state() {
        let sv = second_variation_positivity(&perturbed(0.3, 4)).unwrap();
        assert!(sv.value > 0.0);
        assert!(sv.value >= sv.lower_bound - 1e-6);
    }

    #[test]
    fn second_variation_not_applicable_for_odd_input() {
        assert!(matches!(
            second_variation_positivity(&hermite_mode(1)),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn second_variation_not_applicable_on_the_cone() {
        let g = crate::gaussfit::GaussianParams::new(1, std::f64::consts::PI.powf(-0.25), 0.5)
            .unwrap();
        let u = crate::gaussfit::gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .unwrap();
        assert!(matches!(
            second_variation_positivity(&u),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn odd_scan_attains_two() {
        let (records, summary) = ratio_scan(&Family::OddOnly {
            modes: vec![1, 3, 5],
        })
        .unwrap();
        assert_eq!(records.len(), 3);
        for (r, k) in records.iter().zip([1.0f64, 3.0, 5.0]) {
            assert!((r.ratio - k * (k + 1.0)).abs() < 1e-10);
        }
        assert!((summary.min_ratio - 2.0).abs() < 1e-10);
    }

    #[test]
    fn empty_grid_is_rejected() {
        assert!(ratio_scan(&Family::OddOnly { modes: vec![] }).is_err());
    }

    #[test]
    fn sharpness_curve_decays_like_lambda_squared() {
        let u = perturbed(0.3, 4);
        let curve = sharpness_curve(&u, &[1.0, 10.0]).unwrap();
        let q1 = curve.points[0].1;
        let q10 = curve.points[1].1;
        assert!(q1 > 0.0 && q10 > 0.0);
        assert!(q10 / q1 <= 0.02 * 1.5, "Q(10)/Q(1) = {}", q10 / q1);
        assert!(curve.equivariance_l2 < 1e-6, "{}", curve.equivariance_l2);
    }

    #[test]
    fn sharpness_q_at_unit_lambda_matches_definition() {
        let u = perturbed(0.3, 4);
        let proj = project(&u, 1e-9).unwrap();
        let v = gaussian_on(&u, &proj.gaussian).unwrap();
        let w = SampledFunction::linear_combination(1.0, &u, -1.0, &v).unwrap();
        let expect = compute_deficit(&u).deficit
            / (w.norm_l2_sq() + w.grad_norm_sq() + w.moment_sq());
        let curve = sharpness_curve(&u, &[1.0]).unwrap();
        assert!((curve.points[0].1 - expect).abs() < 1e-12);
    }

    #[test]
    fn sharpened_inequality_saturates_at_the_odd_constant() {
        let u = hermite_mode(1);
        let m0 = sharpened_inequality_check(&u, 2.0, 0.0).unwrap();
        assert!(m0.abs() < 1e-10, "margin {m0}");
        let m1 = sharpened_inequality_check(&u, 2.1, 0.0).unwrap();
        assert!(m1 < 0.0, "margin {m1}");
        // correction terms vanish on the cone
        let g = crate::gaussfit::GaussianParams::new(1, 0.8, 0.9).unwrap();
        let v = crate::gaussfit::gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .unwrap();
        let mv = sharpened_inequality_check(&v, 123.0, 456.0).unwrap();
        assert!(mv.abs() < 1e-6, "margin {mv}");
    }

    #[test]
    fn constant_search_matches_min_ratio() {
        let (records, summary) = ratio_scan(&Family::OddOnly {
            modes: vec![1, 3],
        })
        .unwrap();
        let found = sharpened_constant_search(&records, &[0.0]);
        assert!((found[0].1 - summary.min_ratio).abs() < 1e-12);
    }

    #[test]
    fn random_family_is_reproducible() {
        let fam = Family::RandomHermite {
            max_mode: 6,
            count: 3,
            seed: 7,
        };
        let a = fam.points().unwrap();
        let b = fam.points().unwrap();
        for ((_, ua), (_, ub)) in a.iter().zip(b.iter()) {
            assert_eq!(ua.raw(), ub.raw());
        }
    }

    #[test]
    fn record_scaling_invariance_under_dilation() {
        let u = Descriptor::Grid1D {
            half_width: 16.0,
            point_count: 4096,
        }
        .sample(|x| {
            let h = crate::hermite::eval_basis(x[0], 4);
            (h[0] + 0.3 * h[4]) / 1.09f64.sqrt()
        })
        .unwrap();
        let base = stability_record(&u).unwrap();
        for lambda in [0.5, 2.0] {
            let v = crate::deficit::dilate(&u, crate::deficit::DilationFactor::new(lambda).unwrap())
                .unwrap();
            let r = stability_record(&v).unwrap();
            assert!((r.deficit - base.deficit).abs() <= 1e-6 * (1.0 + base.deficit));
            assert!((r.distance_sq - base.distance_sq).abs() <= 1e-6);
        }
    }
}

//! The runnable invariant suite behind `unclab verify`.
//!
//! Each check measures one mathematical property on a fixed deterministic
//! suite of test functions and compares against its tolerance. Measured
//! values are always reported next to the thresholds so a failure is
//! diagnosable from the report alone.
//!
//! The standard suite deliberately sticks to representations whose
//! discretization error is far below the tightest budgets (1-D grids at
//! N = 4096, Hermite series, radial profiles at N = 2048); full n-D grids are
//! exercised by the checks whose budgets they can meet (Plancherel, parity
//! splits, dilation).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use crate::deficit::{compute_deficit, dilate, expansion_residual, DilationFactor};
use crate::exprdsl;
use crate::funcrep::{Descriptor, SampledFunction};
use crate::gaussfit::{
    cone_check, gaussian_eval, gaussian_on, project, radial_split, sign_change_check,
    GaussianParams,
};
use crate::hermite;
use crate::spectral::{
    debruijn_bound_at, debruijn_check, fourier, fourier_components, hermite_fourier,
    HermiteSpectrum,
};
use crate::stabilitylab::{
    ratio_scan, second_variation_positivity, sharpness_curve, stability_record, Family,
};

/// One named invariant with its measured value and threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub suite: String,
    pub description: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(id: &str, suite: &str, description: &str, measured: f64, threshold: f64) -> Check {
    Check {
        id: id.to_string(),
        suite: suite.to_string(),
        description: description.to_string(),
        measured,
        threshold,
        pass: measured <= threshold,
    }
}

/// Deterministic 30-function suite spanning all representations and
/// dimensions 1-3 (radial profiles carry the higher dimensions).
pub fn standard_suite() -> Vec<(String, SampledFunction)> {
    let grid = |f: &dyn Fn(f64) -> f64| -> SampledFunction {
        Descriptor::Grid1D {
            half_width: 14.0,
            point_count: 4096,
        }
        .sample(|x| f(x[0]))
        .expect("suite member")
    };
    let radial = |n: usize, f: &dyn Fn(f64) -> f64| -> SampledFunction {
        Descriptor::Radial {
            dimension: n,
            max_radius: 12.0,
            point_count: 2048,
        }
        .sample(|x| f(x[0]))
        .expect("suite member")
    };
    let herm = |c: &[f64]| SampledFunction::hermite(c.to_vec()).expect("suite member");
    let hval = |k: usize, x: f64| hermite::eval_basis(x, k)[k];

    let mut out: Vec<(String, SampledFunction)> = Vec::new();
    let mut push = |name: &str, u: SampledFunction| out.push((name.to_string(), u));

    // 1-D grids
    push("grid-gauss-unit", grid(&|x| PI.powf(-0.25) * (-0.5 * x * x).exp()));
    push("grid-gauss-wide", grid(&|x| 0.8 * (-0.2 * x * x).exp()));
    push("grid-gauss-narrow", grid(&|x| 1.3 * (-3.0 * x * x).exp()));
    push("grid-h1", grid(&|x| hval(1, x)));
    push("grid-h2", grid(&|x| hval(2, x)));
    push("grid-h4", grid(&|x| hval(4, x)));
    push(
        "grid-mix-h0-h4",
        grid(&|x| (hval(0, x) + 0.3 * hval(4, x)) / 1.09f64.sqrt()),
    );
    push(
        "grid-poly-gauss",
        grid(&|x| (1.0 + 0.1 * x.powi(4)) * (-0.5 * x * x).exp()),
    );
    push("grid-two-bump", {
        let u = grid(&|x| {
            (-4.0 * (x - 1.5) * (x - 1.5)).exp() + (-4.0 * (x + 1.5) * (x + 1.5)).exp()
        });
        u.normalized().expect("nonzero")
    });
    push("grid-asym", grid(&|x| (x + 0.7) * (-0.5 * x * x).exp()));
    push("grid-odd", grid(&|x| x * (-0.5 * x * x).exp()));
    push(
        "grid-expr-quartic",
        exprdsl::sample(
            &exprdsl::parse("(1+0.1*x^4)*exp(-x^2/2)", 1).expect("fixed source"),
            &Descriptor::Grid1D {
                half_width: 14.0,
                point_count: 4096,
            },
        )
        .expect("suite member"),
    );

    // Hermite series
    push("hermite-ground", herm(&[1.0]));
    push("hermite-h1", herm(&[0.0, 1.0]));
    push("hermite-h2", herm(&[0.0, 0.0, 1.0]));
    push("hermite-h3", herm(&[0.0, 0.0, 0.0, 1.0]));
    push("hermite-even-odd", herm(&[1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()]));
    push("hermite-mix-h0-h4", {
        let s = 1.09f64.sqrt();
        herm(&[1.0 / s, 0.0, 0.0, 0.0, 0.3 / s])
    });
    push("hermite-decay", {
        let c: Vec<f64> = (0..=10).map(|k| 0.5f64.powi(k)).collect();
        herm(&c).normalized().expect("nonzero")
    });
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_817);
    for draw in 0..3 {
        let c: Vec<f64> = (0..=8)
            .map(|k| rng.random_range(-1.0..1.0) / (1.0 + k as f64))
            .collect();
        push(
            &format!("hermite-random-{draw}"),
            herm(&c).normalized().expect("nonzero"),
        );
    }

    // radial profiles in n = 2, 3
    push("radial2-gauss", radial(2, &|r| (-0.5 * r * r).exp()));
    push(
        "radial2-perturbed",
        radial(2, &|r| (1.0 + 0.3 * r * r) * (-0.5 * r * r).exp()),
    );
    push("radial2-ring", radial(2, &|r| r * r * (-r * r).exp()));
    push("radial3-gauss", radial(3, &|r| (-0.5 * r * r).exp()));
    push(
        "radial3-perturbed",
        radial(3, &|r| (1.0 + 0.3 * r * r) * (-0.5 * r * r).exp()),
    );
    push("radial3-shell", {
        let u = radial(3, &|r| {
            (-4.0 * (r - 1.5) * (r - 1.5)).exp() + (-4.0 * (r + 1.5) * (r + 1.5)).exp()
        });
        u.normalized().expect("nonzero")
    });
    push(
        "radial1-gauss",
        Descriptor::Radial {
            dimension: 1,
            max_radius: 12.0,
            point_count: 2048,
        }
        .sample(|x| (-0.7 * x[0] * x[0]).exp())
        .expect("suite member"),
    );
    push("radial2-wide", radial(2, &|r| (-0.15 * r * r).exp()));

    assert!(out.len() >= 30, "suite shrank to {}", out.len());
    out
}

/// Members that sit in the extremal cone (skipped by off-cone checks).
pub fn is_cone_member(name: &str) -> bool {
    matches!(
        name,
        "grid-gauss-unit"
            | "grid-gauss-wide"
            | "grid-gauss-narrow"
            | "hermite-ground"
            | "radial2-gauss"
            | "radial3-gauss"
            | "radial1-gauss"
            | "radial2-wide"
    )
}

/// Purely spherical members (zero radial part).
pub fn is_spherical_member(name: &str) -> bool {
    matches!(name, "grid-h1" | "grid-odd" | "hermite-h1" | "hermite-h3")
}

/// Seeded random Hermite pairs for the quartic-expansion property.
pub fn seeded_hermite_pairs(count: usize, seed: u64) -> Vec<(SampledFunction, SampledFunction)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len_u = rng.random_range(2..=11);
            let len_p = rng.random_range(2..=11);
            let u: Vec<f64> = (0..len_u).map(|_| rng.random_range(-1.0..1.0)).collect();
            let p: Vec<f64> = (0..len_p).map(|_| rng.random_range(-1.0..1.0)).collect();
            (
                SampledFunction::hermite(u).expect("finite"),
                SampledFunction::hermite(p).expect("finite"),
            )
        })
        .collect()
}

/// Run the invariant suite. `suites` filters by module name; a tolerance
/// override replaces every threshold (useful to see measured headroom).
pub fn run(suites: Option<&[String]>, tolerance_override: Option<f64>) -> Vec<Check> {
    let wanted = |name: &str| -> bool {
        suites
            .map(|list| list.iter().any(|s| s == name))
            .unwrap_or(true)
    };
    let mut checks = Vec::new();
    if wanted("funcrep") {
        funcrep_checks(&mut checks);
    }
    if wanted("deficit") {
        deficit_checks(&mut checks);
    }
    if wanted("gaussfit") {
        gaussfit_checks(&mut checks);
    }
    if wanted("spectral") {
        spectral_checks(&mut checks);
    }
    if wanted("stabilitylab") {
        stabilitylab_checks(&mut checks);
    }
    if wanted("exprdsl") {
        exprdsl_checks(&mut checks);
    }
    if let Some(tol) = tolerance_override {
        for c in checks.iter_mut() {
            c.threshold = tol;
            c.pass = c.measured <= tol;
        }
    }
    checks
}

fn funcrep_checks(out: &mut Vec<Check>) {
    let suite = standard_suite();

    let mut ladder_worst: f64 = 0.0;
    for k in 0..=20usize {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        let u = SampledFunction::hermite(c).expect("finite");
        let expect = k as f64 + 0.5;
        ladder_worst = ladder_worst
            .max((u.moment_sq() - expect).abs())
            .max((u.grad_norm_sq() - expect).abs());
    }
    out.push(check(
        "FR1",
        "funcrep",
        "ladder identities: |x h_k|^2 = |h_k'|^2 = k + 1/2 for k <= 20",
        ladder_worst,
        1e-12,
    ));

    let mut cs_worst: f64 = 0.0;
    let mut sym_worst: f64 = 0.0;
    for (i, (_, u)) in suite.iter().enumerate() {
        for (_, w) in suite.iter().skip(i) {
            if u.inner(w).is_err() {
                continue;
            }
            let uw = u.inner(w).expect("compatible");
            let wu = w.inner(u).expect("compatible");
            sym_worst = sym_worst.max((uw - wu).abs());
            let bound = u.norm_l2_sq() * w.norm_l2_sq();
            cs_worst = cs_worst.max((uw * uw - bound) / (1.0 + bound));
        }
    }
    out.push(check(
        "FR2",
        "funcrep",
        "Cauchy-Schwarz on all compatible suite pairs",
        cs_worst,
        1e-12,
    ));
    out.push(check(
        "FR3",
        "funcrep",
        "inner-product symmetry on all compatible suite pairs",
        sym_worst,
        1e-15,
    ));

    let zero = SampledFunction::hermite(vec![0.0, 0.0]).expect("finite");
    let mut positivity = zero.norm_l2_sq().abs();
    for (_, u) in &suite {
        if u.norm_l2_sq() <= 0.0 {
            positivity += 1.0;
        }
    }
    out.push(check(
        "FR4",
        "funcrep",
        "norm positivity: zero iff the zero function",
        positivity,
        0.0,
    ));

    // doubling the resolution of a smooth decaying function moves the
    // quadratures by less than tail + 1e-6
    let coarse = Descriptor::Grid1D {
        half_width: 14.0,
        point_count: 2048,
    }
    .sample(|x| (1.0 + 0.1 * x[0].powi(4)) * (-0.5 * x[0] * x[0]).exp())
    .expect("smooth");
    let fine = coarse
        .resample(&Descriptor::Grid1D {
            half_width: 14.0,
            point_count: 4096,
        })
        .expect("refinement");
    let mut refine_worst: f64 = 0.0;
    let pairs = [
        (coarse.norm_l2_sq_report(), fine.norm_l2_sq()),
        (coarse.moment_sq_report(), fine.moment_sq()),
        (coarse.grad_norm_sq_report(), fine.grad_norm_sq()),
    ];
    for (report, refined) in pairs {
        refine_worst = refine_worst.max((report.value - refined).abs() - report.tail_estimate);
    }
    out.push(check(
        "FR5",
        "funcrep",
        "doubling resolution moves quadratures by less than tail + 1e-6",
        refine_worst,
        1e-6,
    ));

    let ground = SampledFunction::hermite(vec![1.0]).expect("finite");
    let round = ground
        .resample(&Descriptor::Grid1D {
            half_width: 12.0,
            point_count: 1024,
        })
        .and_then(|g| g.resample(&Descriptor::Hermite { modes: 8 }))
        .expect("roundtrip");
    let mut rt_worst: f64 = 0.0;
    for (k, c) in round.raw().iter().enumerate() {
        let expect = if k == 0 { 1.0 } else { 0.0 };
        rt_worst = rt_worst.max((c - expect).abs());
    }
    out.push(check(
        "FR6",
        "funcrep",
        "hermite -> grid -> hermite roundtrip recovers (1, 0, ..)",
        rt_worst,
        1e-8,
    ));
}

fn deficit_checks(out: &mut Vec<Check>) {
    let suite = standard_suite();

    let mut nonneg_worst = f64::NEG_INFINITY;
    let mut identity_worst: f64 = 0.0;
    for (_, u) in &suite {
        let b = compute_deficit(u);
        nonneg_worst = nonneg_worst.max(-b.deficit / (1.0 + b.moment_sq * b.grad_sq));
        identity_worst = identity_worst.max(b.identity_residual());
    }
    out.push(check(
        "D1",
        "deficit",
        "nonnegativity: deficit >= -1e-8 (1 + |xu|^2 |grad u|^2)",
        nonneg_worst,
        1e-8,
    ));
    out.push(check(
        "D2",
        "deficit",
        "breakdown recomputation agreement",
        identity_worst,
        1e-12,
    ));

    let mut dilation_worst: f64 = 0.0;
    for (_, u) in &suite {
        if matches!(u, SampledFunction::Hermite { .. }) {
            continue;
        }
        let d = compute_deficit(u).deficit;
        for lambda in [0.25, 0.5, 2.0, 4.0] {
            let v = dilate(u, DilationFactor::new(lambda).expect("positive")).expect("grid");
            let dv = compute_deficit(&v).deficit;
            dilation_worst = dilation_worst.max((dv - d).abs() / (1.0 + d.abs()));
        }
    }
    out.push(check(
        "D3",
        "deficit",
        "dilation invariance over lambda in {1/4, 1/2, 2, 4}",
        dilation_worst,
        1e-8,
    ));

    let mut homo_worst: f64 = 0.0;
    for (_, u) in suite.iter().take(8) {
        let d = compute_deficit(u).deficit;
        for c in [-2.0, 0.5, 3.0] {
            let dc = compute_deficit(&u.scale(c).expect("finite")).deficit;
            let expect = c.powi(4) * d;
            homo_worst = homo_worst.max((dc - expect).abs() / expect.abs().max(1.0));
        }
    }
    out.push(check(
        "D4",
        "deficit",
        "homogeneity of degree four over c in {-2, 1/2, 3}",
        homo_worst,
        1e-10,
    ));

    let mut quartic_worst: f64 = 0.0;
    for (u, phi) in seeded_hermite_pairs(100, 11) {
        let r = expansion_residual(&u, &phi, &[-1.0, -0.5, 0.1, 1.0]).expect("hermite pair");
        quartic_worst = quartic_worst.max(r);
    }
    out.push(check(
        "D5",
        "deficit",
        "quartic expansion residual on 100 seeded Hermite pairs",
        quartic_worst,
        1e-9,
    ));

    let mut lambda_worst: f64 = 0.0;
    for alpha in [0.2, 0.5, 1.0, 3.0] {
        let l = (40.0f64 / alpha).sqrt().max(10.0);
        let u = Descriptor::Grid1D {
            half_width: l,
            point_count: 4096,
        }
        .sample(|x| (-alpha * x[0] * x[0]).exp())
        .expect("gaussian");
        let b = compute_deficit(&u);
        let (lg, lm) = (b.lambda_grad.expect("nonzero"), b.lambda_moment.expect("nonzero"));
        lambda_worst = lambda_worst.max((lg - lm).abs() / lm.abs());
    }
    out.push(check(
        "D6",
        "deficit",
        "the two lambda diagnostics agree on extremals",
        lambda_worst,
        1e-8,
    ));
}

fn gaussfit_checks(out: &mut Vec<Check>) {
    let suite = standard_suite();

    let mut trans_worst: f64 = 0.0;
    let mut domination_worst = f64::NEG_INFINITY;
    let mut sandwich_worst = f64::NEG_INFINITY;
    let mut spherical_mismatches = 0.0;
    let mut sign_failures = 0.0;
    for (name, u) in &suite {
        let p = project(u, 1e-9).expect("projection");
        let b = compute_deficit(u);
        let scale = 1.0 + b.delta_norm * b.delta_norm;
        trans_worst = trans_worst
            .max(p.r0.abs() / scale)
            .max(p.r1.abs() / scale)
            .max(p.r2.abs() / scale);
        let v = gaussian_on(u, &p.gaussian).expect("sampled v*");
        domination_worst = domination_worst
            .max(v.norm_l2_sq().sqrt() - u.norm_l2_sq().sqrt())
            .max(v.moment_sq().sqrt() - u.moment_sq().sqrt())
            .max(v.grad_norm_sq().sqrt() - u.grad_norm_sq().sqrt());
        let split = radial_split(u);
        let dist = p.distance_sq.sqrt();
        sandwich_worst = sandwich_worst
            .max(split.u_s.norm_l2_sq().sqrt() - dist)
            .max(dist - u.norm_l2_sq().sqrt());
        let spherical = split.u_r.norm_l2_sq() <= 1e-10 * u.norm_l2_sq();
        if spherical != p.is_zero {
            spherical_mismatches += 1.0;
        }
        if !is_cone_member(name) && !sign_change_check(u, &p).unwrap_or(false) {
            sign_failures += 1.0;
        }
    }
    out.push(check(
        "G1",
        "gaussfit",
        "transversality residuals r0, r1, r2 at converged projections",
        trans_worst,
        1e-6,
    ));
    out.push(check(
        "G2",
        "gaussfit",
        "norm domination: |v*| <= |u| in all three norms",
        domination_worst,
        1e-8,
    ));
    out.push(check(
        "G3",
        "gaussfit",
        "sandwich |u_s| <= |u - v*| <= |u|",
        sandwich_worst,
        1e-8,
    ));
    out.push(check(
        "G4",
        "gaussfit",
        "v* = 0 exactly for purely spherical inputs",
        spherical_mismatches,
        0.0,
    ));
    out.push(check(
        "G5",
        "gaussfit",
        "u - v* changes sign off the cone",
        sign_failures,
        0.0,
    ));

    let mut recovery_worst: f64 = 0.0;
    for (c, alpha) in [(1.0, 0.5), (1.4, 2.3), (-0.6, 0.9)] {
        let g = GaussianParams::new(1, c, alpha).expect("params");
        let sampled = gaussian_eval(
            &g,
            &Descriptor::Grid1D {
                half_width: 12.0,
                point_count: 2048,
            },
        )
        .expect("sampled");
        let p = project(&sampled, 1e-9).expect("projection");
        recovery_worst = recovery_worst
            .max((p.gaussian.amplitude - c).abs() / c.abs())
            .max((p.gaussian.width - alpha).abs() / alpha);
    }
    out.push(check(
        "G6",
        "gaussfit",
        "projection of a sampled Gaussian recovers (c, alpha)",
        recovery_worst,
        1e-6,
    ));

    let mut reduction_worst: f64 = 0.0;
    for name in ["grid-asym", "hermite-even-odd"] {
        let u = &suite.iter().find(|(n, _)| n == name).expect("member").1;
        let split = radial_split(u);
        let p_full = project(u, 1e-10).expect("projection");
        let p_radial = project(&split.u_r, 1e-10).expect("projection");
        reduction_worst = reduction_worst
            .max((p_full.gaussian.width - p_radial.gaussian.width).abs())
            .max((p_full.gaussian.amplitude - p_radial.gaussian.amplitude).abs());
    }
    out.push(check(
        "G7",
        "gaussfit",
        "projection only sees the radial part",
        reduction_worst,
        1e-6,
    ));

    let mut equivariance_worst: f64 = 0.0;
    let u = &suite
        .iter()
        .find(|(n, _)| n == "grid-mix-h0-h4")
        .expect("member")
        .1;
    let base = project(u, 1e-9).expect("projection");
    for lambda in [0.5, 2.0] {
        let v = dilate(u, DilationFactor::new(lambda).expect("positive")).expect("grid");
        let fresh = project(&v, 1e-9).expect("projection");
        let expected = GaussianParams::new(
            1,
            base.gaussian.amplitude * lambda.sqrt(),
            base.gaussian.width * lambda * lambda,
        )
        .expect("params");
        equivariance_worst = equivariance_worst
            .max(gaussian_l2_distance(&fresh.gaussian, &expected))
            .max((fresh.distance_sq - base.distance_sq).abs());
    }
    out.push(check(
        "G8",
        "gaussfit",
        "projection commutes with dilation",
        equivariance_worst,
        1e-6,
    ));

    let mut cone_failures = 0.0;
    for g in [
        GaussianParams::new(1, 0.9, 1.7).expect("params"),
        GaussianParams::new(2, 1.2, 0.6).expect("params"),
    ] {
        for c in [0.0, -2.0, 3.0] {
            if !cone_check(&g, c).unwrap_or(false) {
                cone_failures += 1.0;
            }
        }
    }
    out.push(check(
        "G9",
        "gaussfit",
        "the cone is closed under real scaling",
        cone_failures,
        0.0,
    ));
}

fn spectral_checks(out: &mut Vec<Check>) {
    let grid = |l: f64, n: usize, f: &dyn Fn(f64) -> f64| -> SampledFunction {
        Descriptor::Grid1D {
            half_width: l,
            point_count: n,
        }
        .sample(|x| f(x[0]))
        .expect("grid member")
    };

    let mut plancherel_worst: f64 = 0.0;
    let members = [
        grid(12.0, 1024, &|x| PI.powf(-0.25) * (-0.5 * x * x).exp()),
        grid(12.0, 1024, &|x| (x + 0.3 * x * x) * (-0.4 * x * x).exp()),
        Descriptor::GridND {
            dimension: 2,
            half_width: 8.0,
            point_count: 64,
        }
        .sample(|x| (-0.5 * (x[0] * x[0] + x[1] * x[1])).exp() * (1.0 + 0.4 * x[0]))
        .expect("grid member"),
    ];
    for u in &members {
        let pair = fourier(u).expect("grid input");
        plancherel_worst = plancherel_worst.max((pair.u_hat.norm_l2_sq() - u.norm_l2_sq()).abs());
    }
    out.push(check(
        "S1",
        "spectral",
        "Plancherel: |u_hat|^2 = |u|^2",
        plancherel_worst,
        1e-8,
    ));

    // wide, fine grids so the frequency-side stencil error stays below budget
    let hval = |k: usize, x: f64| hermite::eval_basis(x, k)[k];
    let spectral_members = [
        grid(192.0, 32768, &|x| {
            (hval(0, x) + 0.3 * hval(4, x)) / 1.09f64.sqrt()
        }),
        grid(192.0, 32768, &|x| (1.0 + 0.3 * x * x) * (-0.5 * x * x).exp()),
    ];
    let mut symmetry_worst: f64 = 0.0;
    let mut exchange_worst: f64 = 0.0;
    for u in &spectral_members {
        let du = compute_deficit(u).deficit;
        let pair = fourier(u).expect("grid input");
        let dh = compute_deficit(&pair.u_hat).deficit;
        symmetry_worst = symmetry_worst.max((dh - du).abs() / (1.0 + du.abs()));
        let grad = u.grad_norm_sq();
        let moment = u.moment_sq();
        exchange_worst = exchange_worst
            .max((pair.u_hat.moment_sq() - grad).abs() / grad)
            .max((pair.u_hat.grad_norm_sq() - moment).abs() / moment);
    }
    out.push(check(
        "S2",
        "spectral",
        "deficit symmetry under the transform",
        symmetry_worst,
        1e-6,
    ));
    out.push(check(
        "S3",
        "spectral",
        "norm exchange: |xi u_hat|^2 = |grad u|^2 and back",
        exchange_worst,
        1e-6,
    ));

    let u = grid(12.0, 256, &|x| (x + 0.2) * (-0.3 * x * x).exp());
    let (a, c) = fourier_components(&u).expect("grid input");
    let (a2re, a2im) = fourier_components(&a).expect("grid input");
    let (c2re, c2im) = fourier_components(&c).expect("grid input");
    let re = SampledFunction::linear_combination(1.0, &a2re, -1.0, &c2im).expect("same grid");
    let im = SampledFunction::linear_combination(1.0, &a2im, 1.0, &c2re).expect("same grid");
    let n = u.raw().len();
    let reflected: Vec<f64> = (0..n).map(|j| u.raw()[(n - j) % n]).collect();
    let reflected = u.with_values(reflected).expect("finite");
    let diff = SampledFunction::linear_combination(1.0, &re, -1.0, &reflected).expect("same grid");
    let roundtrip = (diff.norm_l2_sq() + im.norm_l2_sq()).sqrt();
    out.push(check(
        "S4",
        "spectral",
        "double transform is the parity reflection",
        roundtrip,
        1e-7,
    ));

    let mut margin_worst: f64 = 0.0;
    let mut spectra = vec![
        vec![1.0],
        vec![0.0, 1.0],
        vec![1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let random: Vec<f64> = (0..=30).map(|_| rng.random_range(-1.0..1.0)).collect();
    let norm: f64 = random.iter().map(|c| c * c).sum::<f64>().sqrt();
    spectra.push(random.iter().map(|c| c / norm).collect());
    for coeffs in spectra {
        let s = HermiteSpectrum::pure(coeffs).expect("finite");
        let d = debruijn_check(&s).expect("normalized");
        margin_worst = margin_worst.max(d.margin.abs());
    }
    out.push(check(
        "S5",
        "spectral",
        "oscillator sum identity: margin = 0 on pure spectra (K <= 30)",
        margin_worst,
        1e-10,
    ));

    let s = HermiteSpectrum::pure(vec![0.6, 0.3, -0.4, 0.2, 0.5]).expect("finite");
    let t = hermite_fourier(&s);
    let ds = compute_deficit(&s.to_function().expect("finite")).deficit;
    let dt = compute_deficit(&t.to_function().expect("finite")).deficit;
    let mut herm_worst = (ds - dt).abs();
    for (x, y) in s.coefficients.iter().zip(t.coefficients.iter()) {
        herm_worst = herm_worst.max((x.abs() - y.abs()).abs());
    }
    out.push(check(
        "S6",
        "spectral",
        "hermite diagonalization preserves magnitudes and the deficit",
        herm_worst,
        1e-12,
    ));

    let ground = grid(16.0, 1024, &|x| PI.powf(-0.25) * (-0.5 * x * x).exp());
    let pair = fourier(&ground).expect("grid input");
    let analytic = pair
        .u_hat
        .descriptor()
        .sample(|x| PI.powf(-0.25) * (-0.5 * x[0] * x[0]).exp())
        .expect("analytic");
    let self_dual = SampledFunction::linear_combination(1.0, &pair.u_hat, -1.0, &analytic)
        .expect("same grid")
        .norm_l2_sq()
        .sqrt();
    out.push(check(
        "S7",
        "spectral",
        "the ground state is a fixed point of the transform",
        self_dual,
        1e-8,
    ));

    let mut bound_worst = f64::NEG_INFINITY;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let mut c = vec![0.0; 9];
        c[0] = 1.0;
        for item in c.iter_mut().skip(1) {
            *item = 0.15 * rng.random_range(-1.0..1.0);
        }
        let f = SampledFunction::hermite(c)
            .expect("finite")
            .normalized()
            .expect("nonzero");
        let measured = (f.moment_sq() * f.grad_norm_sq()).sqrt();
        let p = project(&f, 1e-9).expect("projection");
        let bound = debruijn_bound_at(p.distance_sq.sqrt());
        bound_worst = bound_worst.max(bound - measured);
    }
    out.push(check(
        "S8",
        "spectral",
        "measured uncertainty product beats the distance bound",
        bound_worst,
        0.0,
    ));
}

fn stabilitylab_checks(out: &mut Vec<Check>) {
    let suite = standard_suite();

    let mut decomp_worst: f64 = 0.0;
    let mut chain_worst = f64::NEG_INFINITY;
    let mut positivity_failures = 0.0;
    for (name, u) in &suite {
        if is_cone_member(name) {
            continue;
        }
        let normalized = u.normalized().expect("nonzero");
        let r = stability_record(&normalized).expect("off-cone member");
        decomp_worst = decomp_worst.max(r.decomp_residual);
        if !is_spherical_member(name) {
            match second_variation_positivity(&normalized) {
                Ok(sv) => {
                    chain_worst = chain_worst.max(sv.lower_bound - sv.value);
                    if sv.value <= 0.0 {
                        positivity_failures += 1.0;
                    }
                }
                Err(_) => positivity_failures += 1.0,
            }
        }
    }
    out.push(check(
        "L1",
        "stabilitylab",
        "decomposition identity on every off-cone suite member",
        decomp_worst,
        1e-6,
    ));
    out.push(check(
        "L2",
        "stabilitylab",
        "second variation beats its chain lower bound",
        chain_worst.max(positivity_failures),
        1e-6,
    ));

    let families = [
        Family::OddOnly { modes: vec![1, 3] },
        Family::HermitePerturbation {
            modes: vec![2, 4],
            epsilons: vec![0.1, 0.3],
        },
        Family::TwoBump {
            width: 4.0,
            amplitudes: (1.0, 1.0),
            separations: vec![1.0, 2.0],
        },
    ];
    let mut min_ratio = f64::INFINITY;
    for family in &families {
        let (_, summary) = ratio_scan(family).expect("scan");
        min_ratio = min_ratio.min(summary.min_ratio);
    }
    out.push(check(
        "L3",
        "stabilitylab",
        "scan ratios stay above the 0.01 positivity floor",
        0.01 - min_ratio,
        0.0,
    ));

    let s = 1.09f64.sqrt();
    let reference =
        SampledFunction::hermite(vec![1.0 / s, 0.0, 0.0, 0.0, 0.3 / s]).expect("finite");
    let lambdas = [4.0, 8.0, 16.0, 32.0, 64.0];
    let curve = sharpness_curve(&reference, &lambdas).expect("off-cone reference");
    let scaled: Vec<f64> = curve.points.iter().map(|(l, q)| q * l * l).collect();
    let band_max = scaled.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let band_min = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    out.push(check(
        "L4",
        "stabilitylab",
        "Q(lambda) * lambda^2 stays in a factor-2 band on [4, 64]",
        band_max / band_min,
        2.0,
    ));

    let grid_ref = reference
        .resample(&Descriptor::Grid1D {
            half_width: 16.0,
            point_count: 4096,
        })
        .expect("resample");
    let base = stability_record(&grid_ref).expect("off-cone");
    let mut joint_worst: f64 = 0.0;
    for lambda in [0.5, 2.0] {
        let v = dilate(&grid_ref, DilationFactor::new(lambda).expect("positive")).expect("grid");
        let r = stability_record(&v).expect("off-cone");
        joint_worst = joint_worst
            .max((r.deficit - base.deficit).abs() / (1.0 + base.deficit))
            .max((r.distance_sq - base.distance_sq).abs());
    }
    out.push(check(
        "L5",
        "stabilitylab",
        "records are jointly dilation invariant",
        joint_worst,
        1e-6,
    ));
}

fn exprdsl_checks(out: &mut Vec<Check>) {
    let mut roundtrip_failures = 0.0;
    for src in [
        "exp(-x^2)",
        "(1+0.1*x^4)*exp(-x^2/2)",
        "-x^2",
        "2^3^2",
        "1-2-3",
        "sin(x1)*cos(x2)/(1+x3^2)",
        "sqrt(abs(x1))",
    ] {
        let dim = if src.contains("x2") || src.contains("x3") { 3 } else { 1 };
        let e1 = match exprdsl::parse(src, dim) {
            Ok(e) => e,
            Err(_) => {
                roundtrip_failures += 1.0;
                continue;
            }
        };
        match exprdsl::parse(&e1.to_string(), dim) {
            Ok(e2) if e2 == e1 => {}
            _ => roundtrip_failures += 1.0,
        }
    }
    out.push(check(
        "E1",
        "exprdsl",
        "parse-print-parse is a fixed point",
        roundtrip_failures,
        0.0,
    ));

    let mut offset_failures = 0.0;
    for (src, want) in [("x1*x2", 3usize), ("1++2", 2), ("exp", 3), ("2^x1", 2)] {
        match exprdsl::parse(src, 1) {
            Err(e) if e.offset == want => {}
            _ => offset_failures += 1.0,
        }
    }
    out.push(check(
        "E2",
        "exprdsl",
        "parse errors land on the first invalid byte",
        offset_failures,
        0.0,
    ));

    let mut eval_worst: f64 = 0.0;
    let cases: [(&str, usize, &[f64], f64); 3] = [
        ("r^2", 2, &[3.0, 4.0], 25.0),
        ("2^3^2", 1, &[0.0], 512.0),
        ("exp(-r^2/2)", 3, &[0.0, 0.0, 0.0], 1.0),
    ];
    for (src, dim, point, expect) in cases {
        let e = exprdsl::parse(src, dim).expect("fixed source");
        let v = exprdsl::evaluate(&e, point).expect("finite point");
        eval_worst = eval_worst.max((v - expect).abs());
    }
    out.push(check(
        "E3",
        "exprdsl",
        "evaluation oracle values",
        eval_worst,
        1e-12,
    ));
}

fn gaussian_l2_distance(a: &GaussianParams, b: &GaussianParams) -> f64 {
    let n = a.dimension as f64;
    let cross = (PI / (a.width + b.width)).powf(n / 2.0);
    (a.l2_sq() + b.l2_sq() - 2.0 * a.amplitude * b.amplitude * cross)
        .max(0.0)
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_has_thirty_members() {
        assert!(standard_suite().len() >= 30);
    }

    #[test]
    fn full_run_passes() {
        let checks = run(None, None);
        assert!(checks.len() >= 25);
        for c in &checks {
            assert!(
                c.pass,
                "{} ({}): measured {} vs threshold {}",
                c.id, c.description, c.measured, c.threshold
            );
        }
    }

    #[test]
    fn suite_filter_restricts_checks() {
        let checks = run(Some(&["spectral".to_string()]), None);
        assert!(!checks.is_empty());
        assert!(checks.iter().all(|c| c.suite == "spectral"));
    }

    #[test]
    fn overtight_tolerance_reports_failures() {
        let checks = run(Some(&["funcrep".to_string()]), Some(1e-300));
        assert!(checks.iter().any(|c| !c.pass));
    }
}

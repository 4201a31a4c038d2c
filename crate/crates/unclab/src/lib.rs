//! unclab — a numerical laboratory for the Heisenberg uncertainty deficit.
//!
//! The deficit of a function u on ℝⁿ,
//!
//! ```text
//! δ(u) = (∫|x|²|u|²) (∫|∇u|²) − (n²/4) (∫|u|²)²,
//! ```
//!
//! is nonnegative and vanishes exactly on the Gaussian cone
//! `E = {c·e^{-α|x|²}}`. This crate computes δ on several discrete
//! representations, projects functions onto E in L², expands δ exactly to
//! fourth order along any direction, and measures how strongly the deficit
//! controls the distance to E — the quantitative-stability picture — at desk
//! scale in dimensions 1 to 3.
//!
//! Modules:
//!
//! * [`funcrep`] — function representations with quadrature and exact
//!   Hermite ladder pairings.
//! * [`deficit`] — the deficit, the dilation action, the quartic expansion.
//! * [`gaussfit`] — the extremal cone, nearest-Gaussian projection, radial
//!   and spherical parts, geometry checks.
//! * [`spectral`] — unitary Fourier transform, Hermite diagonalization, the
//!   oscillator-units sharpened bound.
//! * [`stabilitylab`] — stability records, family scans, second-variation
//!   positivity, sharpness curves.
//! * [`exprdsl`] — the expression language for defining test functions.
//! * [`verify`] — the runnable invariant suite.
//! * [`cli`] — the `unclab` binary's subcommands.
//!
//! Start with the runnable examples (`cargo run --example deficit_basics`)
//! or the CLI (`cargo run -- deficit --expr "exp(-x^2/2)"`).

pub mod cli;
pub mod deficit;
mod error;
pub mod exprdsl;
pub mod funcrep;
pub mod gaussfit;
pub mod hermite;
pub mod input;
pub mod spectral;
pub mod stabilitylab;
pub mod verify;

pub use error::{Error, Result};
pub use funcrep::{Descriptor, QuadratureReport, SampledFunction};
pub use gaussfit::{GaussianParams, ProjectionResult, RadialSplit};
pub use deficit::{DeficitBreakdown, DilationFactor, VariationTerms};
pub use spectral::{FourierPair, HermiteSpectrum};
pub use stabilitylab::{Family, ScanSummary, SharpnessCurve, StabilityRecord};

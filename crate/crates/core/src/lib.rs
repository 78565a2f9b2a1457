//! Ground-state energies of `-Δ + V` for confining potentials and the
//! quantities around the sharp lower bound
//!
//! ```text
//! E₀ ≥ −t⁻¹ ln ∫ e^{−tV} dx + d t⁻¹ (1 + ½ ln(πt))
//! ```
//!
//! The crate discretizes the Schrödinger operator on uniform line or radial
//! grids, solves the tridiagonal eigenproblem by Sturm bisection, and
//! evaluates the bound's deficit, the L¹ stability distance of the Gibbs
//! density to the matched Gaussian family, and every auxiliary inequality
//! that enters the stability argument (log-Sobolev, Gibbs, Pinsker,
//! Golden–Thompson).
//!
//! Module map:
//!
//! - [`potential`]: the catalog of confining potentials and their symmetry transforms.
//! - [`discretize`]: truncation radii and grids with trapezoidal weights.
//! - [`eigensolve`]: tridiagonal assembly, Sturm bisection, inverse iteration.
//! - [`quadrature`]: integrals, distances and entropies of grid functions.
//! - [`functionals`]: deficit, stability distance, log-Sobolev and Gibbs functionals.
//! - [`oracle`]: closed forms for the harmonic family and Gaussian geometry.
//! - [`lsi_lab`]: trial functions and the step-by-step stability chain.

#![forbid(unsafe_code)]

pub mod discretize;
pub mod eigensolve;
mod error;
pub mod functionals;
pub mod lsi_lab;
pub mod optimize;
pub mod oracle;
pub mod potential;
pub mod quadrature;

pub use discretize::{Grid, GridKind};
pub use eigensolve::{SpectralResult, TridiagonalOperator};
pub use error::{Error, Result};
pub use functionals::{DeficitReport, Numerics, NumericsRecord};
pub use potential::{Family, Potential, Symmetry};
pub use quadrature::DensityOnGrid;

//! Trial functions for the log-Sobolev inequality and the stability chain
//! evaluated step by step on a computed ground state.
//!
//! With `λ² = πt` (so that `T = πλ⁻² = t⁻¹`) the deficit splits exactly as
//!
//! ```text
//! D = L(ψ₀, λ)/(πt) + G(ψ₀², V, 1/t)
//! ```
//!
//! where `L` is the log-Sobolev deficit and `G` the Gibbs gap. The Pinsker
//! bound `G ≥ (2t)⁻¹‖ψ₀² − ρ_Gibbs‖₁²` then gives the κ-free fragment
//! `t·D ≥ ½‖ψ₀² − ρ_Gibbs‖₁²`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::discretize::{Grid, GridKind};
use crate::error::{invalid, Error, Result};
use crate::functionals::{self, deficit_from, logsob_extremal, Numerics};
use crate::potential::Potential;
use crate::quadrature::{self, DensityOnGrid};

/// Slack allowed in the chain inequality `t·D ≥ ½‖ψ₀² − ρ_Gibbs‖₁²`.
pub const CHAIN_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub enum TrialKind {
    /// `λ^{−1/2} e^{−π(x−b)²/(2λ²)}`.
    GaussianExtremal { lambda: f64, center: f64 },
    /// Ground state of `−d²/dx² + V` on the grid.
    GroundStateOf { potential: Potential, t: f64 },
    /// `base·(1 + amplitude·cos(mode_index·(x − c)/w))` renormalized, with
    /// `c`, `w` the mean and standard deviation of `base²`; `|amplitude| < 1`.
    Perturbed {
        base: Box<TrialKind>,
        mode_index: usize,
        amplitude: f64,
    },
}

/// Nonnegative, unit-norm samples on a line grid.
#[derive(Clone, Debug)]
pub struct TrialFunction {
    pub kind: TrialKind,
    pub samples: Vec<f64>,
    /// `|Σ wᵢψᵢ² − 1|` after normalization.
    pub normalization_error: f64,
}

fn normalize(mut samples: Vec<f64>, grid: &Grid) -> (Vec<f64>, f64) {
    let norm: f64 = samples.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    let s = norm.sqrt();
    samples.iter_mut().for_each(|p| *p /= s);
    let after: f64 = samples.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    (samples, (after - 1.0).abs())
}

fn sample_kind(kind: &TrialKind, grid: &Grid) -> Result<Vec<f64>> {
    match kind {
        TrialKind::GaussianExtremal { lambda, center } => {
            if !(*lambda > 0.0) {
                return invalid(format!("lambda must be positive, got {lambda}"));
            }
            Ok(grid
                .nodes()
                .iter()
                .map(|x| logsob_extremal(*lambda, 1, (x - center) * (x - center)))
                .collect())
        }
        TrialKind::GroundStateOf { potential, t } => {
            let sol = functionals::solve_on_grid(potential, *t, grid, 1, functionals::Numerics::default().tol)?;
            Ok(sol.spectral.ground_state)
        }
        TrialKind::Perturbed {
            base,
            mode_index,
            amplitude,
        } => {
            if !(amplitude.abs() < 1.0) {
                return invalid(format!("|amplitude| must be < 1, got {amplitude}"));
            }
            let (b, _) = normalize(sample_kind(base, grid)?, grid);
            let moment = |k: i32| -> f64 {
                b.iter()
                    .zip(grid.nodes())
                    .zip(grid.weights())
                    .map(|((p, x), w)| w * p * p * x.powi(k))
                    .sum()
            };
            let c = moment(1);
            let width = (moment(2) - c * c).max(0.0).sqrt().max(f64::MIN_POSITIVE);
            let k = *mode_index as f64;
            Ok(b.iter()
                .zip(grid.nodes())
                .map(|(p, x)| p * (1.0 + amplitude * (k * (x - c) / width).cos()))
                .collect())
        }
    }
}

impl TrialFunction {
    pub fn new(kind: TrialKind, grid: &Grid) -> Result<Self> {
        if !matches!(grid.kind(), GridKind::Line { .. }) {
            return Err(Error::Unsupported("trial functions live on line grids".into()));
        }
        let raw = sample_kind(&kind, grid)?;
        if let Some((idx, &value)) = raw.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
            return Err(Error::Negative { idx, value });
        }
        let (samples, normalization_error) = normalize(raw, grid);
        Ok(Self {
            kind,
            samples,
            normalization_error,
        })
    }
}

/// Every intermediate quantity of the stability chain for one `(V, t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub t: f64,
    /// `√(πt)`.
    pub lambda: f64,
    /// Deficit, extrapolated when refinement is on.
    pub deficit: f64,
    /// Deficit from the finest grid alone, the one the split below refers to.
    pub deficit_grid: f64,
    /// `L(ψ₀, λ)`.
    pub logsob_deficit: f64,
    /// `inf_b ∫(ψ₀ − g_b)²`.
    pub logsob_stability_term: f64,
    /// `(πt)⁻¹·inf_b ∫(ψ₀ − g_b)²`.
    pub logsob_stability_weighted: f64,
    pub logsob_center: f64,
    /// `G = ∫(V + t⁻¹ ln ψ₀²)ψ₀² + t⁻¹ ln Z`.
    pub gibbs_gap: f64,
    /// `‖ψ₀² − ρ_Gibbs‖₁`.
    pub l1_ground_gibbs: f64,
    /// `(2t)⁻¹‖ψ₀² − ρ_Gibbs‖₁²`.
    pub pinsker_term: f64,
    /// `‖ψ₀² − g_b²‖₁` at the log-Sobolev center.
    pub l1_ground_gaussian: f64,
    /// `¼‖ψ₀² − g_b²‖₁²`, the Schwarz lower bound of the L² term.
    pub schwarz_lower_bound: f64,
    /// `‖ρ_Gibbs − g_b²‖₁` at the log-Sobolev center.
    pub l1_gibbs_gaussian: f64,
    /// `(‖ψ₀² − g_b²‖₁ + ‖ψ₀² − ρ_Gibbs‖₁)²`, an upper bound of `S²`.
    pub triangle_bound: f64,
    /// The stability distance `S` itself.
    pub stability_distance: f64,
    /// `D_grid − L/(πt) − G`.
    pub decomposition_residual: f64,
    /// `t·D − ½‖ψ₀² − ρ_Gibbs‖₁²`.
    pub chain_margin: f64,
    pub chain_holds: bool,
    /// `min_b [∫(ψ₀ − g_b)² − ¼(∫|ψ₀² − g_b²|)²]` over the Schwarz scan.
    pub schwarz_worst_margin: f64,
    pub triangle_margin: f64,
}

/// Centers scanned for the Schwarz step, relative to the log-Sobolev center,
/// in units of `√t`.
const SCHWARZ_SCAN: [f64; 9] = [-2.0, -1.0, -0.5, -0.1, 0.0, 0.1, 0.5, 1.0, 2.0];

/// Unit-mass density `g_b²` on the grid and the matching amplitude `g_b`.
fn gaussian_pair(grid: &Grid, t: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let lambda = (PI * t).sqrt();
    let amp: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| logsob_extremal(lambda, 1, (x - b) * (x - b)))
        .collect();
    let (amp, _) = normalize(amp, grid);
    let dens = amp.iter().map(|a| a * a).collect();
    (amp, dens)
}

fn l2_sq(a: &[f64], b: &[f64], grid: &Grid) -> f64 {
    a.iter()
        .zip(b)
        .zip(grid.weights())
        .map(|((x, y), w)| w * (x - y).powi(2))
        .sum()
}

/// Runs the stability chain on the ground state of a one-dimensional potential.
pub fn proof_chain_report(potential: &Potential, t: f64, numerics: &Numerics) -> Result<ChainReport> {
    if potential.dimension() != 1 || potential.is_separable() {
        return Err(Error::Unsupported("chain reports need a one-dimensional potential".into()));
    }
    let sol = functionals::solve_potential(potential, t, numerics, 1)?;
    let grid = sol.grid();
    let psi = &sol.fine.spectral.ground_state;
    let lambda = (PI * t).sqrt();
    let deficit = deficit_from(sol.e0(), sol.ln_z, t, 1);
    let deficit_grid = deficit_from(sol.fine.e0(), sol.fine.ln_z, t, 1);

    let logsob = functionals::logsob_deficit(psi, grid, lambda)?;
    let fit = functionals::logsob_stability_fit(psi, grid, lambda)?;

    let rho = DensityOnGrid::from_amplitude(psi, grid)?;
    let gibbs = DensityOnGrid::new(sol.fine.gibbs.clone(), grid)?;
    let gibbs_gap = functionals::gibbs_functional(&rho, potential, 1.0 / t)? + sol.fine.ln_z / t;
    let l1_ground_gibbs = quadrature::l1_distance(&rho, &gibbs)?;

    let (_, dens_b) = gaussian_pair(grid, t, fit.x);
    let gauss = DensityOnGrid::new(dens_b, grid)?;
    let l1_ground_gaussian = quadrature::l1_distance(&rho, &gauss)?;
    let l1_gibbs_gaussian = quadrature::l1_distance(&gibbs, &gauss)?;
    let triangle_bound = (l1_ground_gaussian + l1_ground_gibbs).powi(2);

    let mut schwarz_worst = f64::INFINITY;
    for k in SCHWARZ_SCAN {
        let (amp, dens) = gaussian_pair(grid, t, fit.x + k * t.sqrt());
        let l2 = l2_sq(psi, &amp, grid);
        let l1 = quadrature::l1_distance(&rho, &DensityOnGrid::new(dens, grid)?)?;
        schwarz_worst = schwarz_worst.min(l2 - 0.25 * l1 * l1);
    }

    let (s, _) = functionals::stability_distance(potential, t, numerics)?;
    let chain_margin = t * deficit - 0.5 * l1_ground_gibbs * l1_ground_gibbs;
    Ok(ChainReport {
        t,
        lambda,
        deficit,
        deficit_grid,
        logsob_deficit: logsob,
        logsob_stability_term: fit.value,
        logsob_stability_weighted: fit.value / (PI * t),
        logsob_center: fit.x,
        gibbs_gap,
        l1_ground_gibbs,
        pinsker_term: l1_ground_gibbs * l1_ground_gibbs / (2.0 * t),
        l1_ground_gaussian,
        schwarz_lower_bound: 0.25 * l1_ground_gaussian * l1_ground_gaussian,
        l1_gibbs_gaussian,
        triangle_bound,
        stability_distance: s,
        decomposition_residual: deficit_grid - logsob / (PI * t) - gibbs_gap,
        chain_margin,
        chain_holds: chain_margin >= -CHAIN_TOL,
        schwarz_worst_margin: schwarz_worst,
        triangle_margin: l1_ground_gaussian + l1_ground_gibbs - l1_gibbs_gaussian,
    })
}

//! The deficit of the sharp eigenvalue bound, the L¹ stability distance to the
//! matched Gaussian family, and the functionals of the stability argument.

use std::f64::consts::PI;

use serde::Serialize;

use crate::discretize::{self, Grid, GridKind};
use crate::eigensolve::{self, SpectralResult, EIGEN_TOL};
use crate::error::{invalid, Error, Result};
use crate::optimize::{self, Minimum};
use crate::potential::Potential;
use crate::quadrature::{self, DensityOnGrid};

pub const DEFAULT_LINE_POINTS: usize = 2001;
pub const DEFAULT_RADIAL_POINTS: usize = 2000;
pub const DEFAULT_EPSILON: f64 = 1e-12;
/// Below this stability distance the ratio `t·deficit/S²` is not reported.
pub const RATIO_THRESHOLD: f64 = 1e-3;
/// Golden-section tolerance on the Gaussian center.
pub const CENTER_TOL: f64 = 1e-8;
const CENTER_SCAN: usize = 101;
const ANGULAR_NODES: usize = 512;
/// States with `t(E − E₀)` above this are dropped from the heat trace.
const TRACE_CUTOFF: f64 = 37.0;
const MAX_TRACE_TERMS: usize = 2000;

/// Discretization controls.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Numerics {
    /// Grid nodes; `None` picks 2001 (line) or 2000 (radial).
    pub n_points: Option<usize>,
    /// Truncation radius; `None` picks it from `epsilon`.
    pub radius: Option<f64>,
    pub epsilon: f64,
    /// Also solve with halved spacing and Richardson-extrapolate `E` and `ln Z`.
    pub refine: bool,
    pub tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            n_points: None,
            radius: None,
            epsilon: DEFAULT_EPSILON,
            refine: false,
            tol: EIGEN_TOL,
        }
    }
}

impl Numerics {
    pub fn refined(mut self) -> Self {
        self.refine = true;
        self
    }

    pub fn with_points(mut self, n: usize) -> Self {
        self.n_points = Some(n);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericsRecord {
    pub n_points: usize,
    pub radius: f64,
    pub residual: f64,
    /// `|D(h/2) − D(h)|` when refinement is on.
    pub err_estimate: Option<f64>,
}

/// Everything computed for one `(V, t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeficitReport {
    pub t: f64,
    pub dimension: usize,
    pub e0: f64,
    pub ln_z: f64,
    pub deficit: f64,
    pub stability_distance: Option<f64>,
    pub b_opt: Option<f64>,
    pub ratio: Option<f64>,
    pub numerics: NumericsRecord,
}

/// `E₀ + t⁻¹ ln Z − d t⁻¹ (1 + ½ ln(πt))`.
pub fn deficit_from(e0: f64, ln_z: f64, t: f64, d: usize) -> f64 {
    e0 + ln_z / t - d as f64 / t * (1.0 + 0.5 * (PI * t).ln())
}

fn check_t(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        invalid(format!("t must be positive, got {t}"))
    }
}

/// Eigen and Gibbs data of a non-separable potential on one grid.
#[derive(Clone, Debug)]
pub struct GridSolve {
    pub spectral: SpectralResult,
    /// Normalized Gibbs density `e^{−tV}/Z` on the grid.
    pub gibbs: Vec<f64>,
    pub ln_z: f64,
}

impl GridSolve {
    pub fn grid(&self) -> &Grid {
        &self.spectral.grid
    }

    pub fn e0(&self) -> f64 {
        self.spectral.eigenvalues[0]
    }
}

pub fn solve_on_grid(potential: &Potential, t: f64, grid: &Grid, k: usize, tol: f64) -> Result<GridSolve> {
    let op = eigensolve::assemble(potential, grid)?;
    let spectral = eigensolve::solve(&op, k, tol)?;
    let (gibbs, ln_z) = quadrature::gibbs_weights(potential, t, grid)?;
    Ok(GridSolve {
        spectral,
        gibbs,
        ln_z,
    })
}

/// Solution of a non-separable potential, optionally on two grids.
#[derive(Clone, Debug)]
pub struct PotentialSolution {
    /// Finest grid solved.
    pub fine: GridSolve,
    pub coarse: Option<GridSolve>,
    /// Lowest eigenvalues, extrapolated when refined.
    pub eigenvalues: Vec<f64>,
    pub ln_z: f64,
}

impl PotentialSolution {
    pub fn e0(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn grid(&self) -> &Grid {
        self.fine.grid()
    }
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Grid for a non-separable potential under the given controls.
pub fn grid_for(potential: &Potential, t: f64, numerics: &Numerics) -> Result<Grid> {
    let radius = match numerics.radius {
        Some(r) => r,
        None => discretize::truncation_radius(potential, t, numerics.epsilon)?,
    };
    let n = numerics.n_points.unwrap_or(if potential.is_radial() {
        DEFAULT_RADIAL_POINTS
    } else {
        DEFAULT_LINE_POINTS
    });
    discretize::grid_for(potential, radius, n)
}

/// Solves a non-separable potential with the `k` lowest eigenvalues.
pub fn solve_potential(potential: &Potential, t: f64, numerics: &Numerics, k: usize) -> Result<PotentialSolution> {
    check_t(t)?;
    if potential.is_separable() {
        return Err(Error::Unsupported("separable potentials are solved per factor".into()));
    }
    let grid = grid_for(potential, t, numerics)?;
    let base = solve_on_grid(potential, t, &grid, k, numerics.tol)?;
    if !numerics.refine {
        return Ok(PotentialSolution {
            eigenvalues: base.spectral.eigenvalues.clone(),
            ln_z: base.ln_z,
            fine: base,
            coarse: None,
        });
    }
    let fine = solve_on_grid(potential, t, &grid.refined()?, k, numerics.tol)?;
    let eigenvalues = base
        .spectral
        .eigenvalues
        .iter()
        .zip(&fine.spectral.eigenvalues)
        .map(|(&c, &f)| richardson(c, f))
        .collect();
    Ok(PotentialSolution {
        eigenvalues,
        ln_z: richardson(base.ln_z, fine.ln_z),
        fine,
        coarse: Some(base),
    })
}

struct Assembled {
    report: DeficitReport,
    /// Solution of the single factor of a non-separable potential.
    single: Option<PotentialSolution>,
}

fn assemble_deficit(potential: &Potential, t: f64, numerics: &Numerics) -> Result<Assembled> {
    check_t(t)?;
    let d = potential.dimension();
    let mut solutions = Vec::new();
    for f in potential.factors() {
        solutions.push(solve_potential(&f, t, numerics, 1)?);
    }
    let e0: f64 = solutions.iter().map(PotentialSolution::e0).sum();
    let ln_z: f64 = solutions.iter().map(|s| s.ln_z).sum();
    let err_estimate = if numerics.refine {
        let raw = |pick: &dyn Fn(&PotentialSolution) -> &GridSolve| {
            let e: f64 = solutions.iter().map(|s| pick(s).e0()).sum();
            let l: f64 = solutions.iter().map(|s| pick(s).ln_z).sum();
            deficit_from(e, l, t, d)
        };
        let fine = raw(&|s| &s.fine);
        let coarse = raw(&|s| s.coarse.as_ref().expect("refined solve keeps coarse grid"));
        Some((fine - coarse).abs())
    } else {
        None
    };
    let numerics_record = NumericsRecord {
        n_points: solutions.iter().map(|s| s.grid().len()).max().unwrap_or(0),
        radius: solutions.iter().map(|s| s.grid().radius()).fold(0.0, f64::max),
        residual: solutions.iter().map(|s| s.fine.spectral.residual).fold(0.0, f64::max),
        err_estimate,
    };
    let report = DeficitReport {
        t,
        dimension: d,
        e0,
        ln_z,
        deficit: deficit_from(e0, ln_z, t, d),
        stability_distance: None,
        b_opt: None,
        ratio: None,
        numerics: numerics_record,
    };
    let single = if potential.is_separable() {
        None
    } else {
        solutions.pop()
    };
    Ok(Assembled { report, single })
}

/// Ground energy, log-partition function and deficit; no stability fields.
///
/// Separable potentials add the one-dimensional ground energies and
/// log-partition functions of their factors.
pub fn keller_deficit(potential: &Potential, t: f64, numerics: &Numerics) -> Result<DeficitReport> {
    assemble_deficit(potential, t, numerics).map(|a| a.report)
}

/// Deficit together with the stability distance and ratio when the symmetry
/// class supports them.
pub fn evaluate(potential: &Potential, t: f64, numerics: &Numerics) -> Result<DeficitReport> {
    let Assembled { mut report, single } = assemble_deficit(potential, t, numerics)?;
    if let Some(sol) = single {
        let (s, b) = stability_on_grid(potential, t, sol.grid(), &sol.fine.gibbs)?;
        report.stability_distance = Some(s);
        report.b_opt = Some(b);
        report.ratio = stability_ratio(&report);
    }
    Ok(report)
}

/// `inf_b ‖e^{−tV}/Z − (πt)^{−d/2} e^{−|x−b|²/t}‖₁` and the minimizing shift.
///
/// In d = 1 the returned shift is signed; for radial potentials it is the
/// distance of the best Gaussian center from the origin.
pub fn stability_distance(potential: &Potential, t: f64, numerics: &Numerics) -> Result<(f64, f64)> {
    check_t(t)?;
    if potential.is_separable() {
        return Err(Error::Unsupported(
            "stability distance needs d = 1 or a radial potential".into(),
        ));
    }
    let mut grid = grid_for(potential, t, numerics)?;
    if numerics.refine {
        grid = grid.refined()?;
    }
    let (gibbs, _) = quadrature::gibbs_weights(potential, t, &grid)?;
    stability_on_grid(potential, t, &grid, &gibbs)
}

/// L¹ distance of a line density to the grid-normalized Gaussian
/// `e^{−(x−b)²/t}`.
pub fn line_gaussian_l1(rho: &[f64], grid: &Grid, t: f64, b: f64) -> f64 {
    let g: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| (-(x - b) * (x - b) / t).exp())
        .collect();
    let mass: f64 = g.iter().zip(grid.weights()).map(|(g, w)| g * w).sum();
    rho.iter()
        .zip(&g)
        .zip(grid.weights())
        .map(|((r, g), w)| w * (r - g / mass).abs())
        .sum()
}

/// L¹ distance of a radial density to the normalized Gaussian `e^{−|x−b|²/t}`
/// with `|b| = beta`, integrated in bipolar coordinates `(r, θ)`.
pub fn radial_gaussian_l1(rho: &[f64], grid: &Grid, t: f64, beta: f64) -> f64 {
    let d = grid.dimension();
    let w = grid.weights();
    if beta == 0.0 {
        let g: Vec<f64> = grid.nodes().iter().map(|r| (-r * r / t).exp()).collect();
        let mass: f64 = g.iter().zip(w).map(|(g, w)| g * w).sum();
        return rho
            .iter()
            .zip(&g)
            .zip(w)
            .map(|((r, g), w)| w * (r - g / mass).abs())
            .sum();
    }
    let thetas: Vec<f64> = (0..ANGULAR_NODES)
        .map(|j| (j as f64 + 0.5) * PI / ANGULAR_NODES as f64)
        .collect();
    let mut nu: Vec<f64> = thetas.iter().map(|th| th.sin().powi(d as i32 - 2)).collect();
    let total: f64 = nu.iter().sum();
    nu.iter_mut().for_each(|v| *v /= total);
    let cos: Vec<f64> = thetas.iter().map(|th| th.cos()).collect();
    let gauss = |r: f64, c: f64| (-(r * r + beta * beta - 2.0 * r * beta * c) / t).exp();
    let mass: f64 = grid
        .nodes()
        .iter()
        .zip(w)
        .map(|(&r, w)| w * nu.iter().zip(&cos).map(|(n, &c)| n * gauss(r, c)).sum::<f64>())
        .sum();
    grid.nodes()
        .iter()
        .zip(w)
        .zip(rho)
        .map(|((&r, w), &p)| {
            w * nu
                .iter()
                .zip(&cos)
                .map(|(n, &c)| n * (p - gauss(r, c) / mass).abs())
                .sum::<f64>()
        })
        .sum()
}

/// Offsets of the radial verification scan, in units of `√t`.
pub const RADIAL_SCAN: [f64; 3] = [0.0, 0.1, 0.2];

fn stability_on_grid(potential: &Potential, t: f64, grid: &Grid, gibbs: &[f64]) -> Result<(f64, f64)> {
    match grid.kind() {
        GridKind::Line { .. } => {
            let centroid: f64 = gibbs
                .iter()
                .zip(grid.nodes())
                .zip(grid.weights())
                .map(|((r, x), w)| w * r * x)
                .sum();
            let half = 5.0 * t.sqrt();
            let Minimum { x, value } = optimize::scan_then_golden(
                |b| line_gaussian_l1(gibbs, grid, t, b),
                centroid - half,
                centroid + half,
                CENTER_SCAN,
                CENTER_TOL,
            );
            Ok((value.clamp(0.0, 2.0), x))
        }
        GridKind::Radial { .. } => {
            let center_norm = potential
                .symmetry_center()
                .iter()
                .map(|c| c * c)
                .sum::<f64>()
                .sqrt();
            let (beta, s) = RADIAL_SCAN
                .iter()
                .map(|k| {
                    let beta = k * t.sqrt();
                    (beta, radial_gaussian_l1(gibbs, grid, t, beta))
                })
                .fold((0.0, f64::INFINITY), |acc, (b, s)| if s < acc.1 { (b, s) } else { acc });
            Ok((s.clamp(0.0, 2.0), center_norm + beta))
        }
        GridKind::Counting => Err(Error::Unsupported("stability on a counting grid".into())),
    }
}

/// `t·deficit/S²`, or `None` in the near-equality regime `S < 10⁻³`.
pub fn stability_ratio(report: &DeficitReport) -> Option<f64> {
    match report.stability_distance {
        Some(s) if s >= RATIO_THRESHOLD => Some(report.t * report.deficit / (s * s)),
        _ => None,
    }
}

fn check_amplitude(psi: &[f64], grid: &Grid) -> Result<()> {
    if psi.len() != grid.len() {
        return Err(Error::LengthMismatch(psi.len(), grid.len()));
    }
    if let Some((idx, &value)) = psi.iter().enumerate().find(|(_, p)| !(**p >= 0.0)) {
        return Err(Error::Negative { idx, value });
    }
    Ok(())
}

/// `λ²∫|∇ψ|² − π∫ψ² ln ψ² − dπ(1 + ln λ)` for a normalized nonnegative `ψ`.
pub fn logsob_deficit(psi: &[f64], grid: &Grid, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return invalid(format!("lambda must be positive, got {lambda}"));
    }
    check_amplitude(psi, grid)?;
    let entropy = quadrature::entropy_term(psi, grid)?;
    let kinetic = quadrature::dirichlet_energy(psi, grid)?;
    let d = grid.dimension() as f64;
    Ok(lambda * lambda * kinetic - PI * entropy - d * PI * (1.0 + lambda.ln()))
}

/// The log-Sobolev optimizer `λ^{−d/2} e^{−π|x−b|²/(2λ²)}` at one node.
pub fn logsob_extremal(lambda: f64, d: usize, r2: f64) -> f64 {
    lambda.powf(-(d as f64) / 2.0) * (-PI * r2 / (2.0 * lambda * lambda)).exp()
}

/// Minimum over `b` of `∫(ψ − λ^{−d/2} e^{−π|x−b|²/(2λ²)})²` with the minimizer.
///
/// Radial grids only represent `b = 0`.
pub fn logsob_stability_fit(psi: &[f64], grid: &Grid, lambda: f64) -> Result<Minimum> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return invalid(format!("lambda must be positive, got {lambda}"));
    }
    check_amplitude(psi, grid)?;
    let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm });
    }
    let d = grid.dimension();
    let sq = |b: f64| -> f64 {
        psi.iter()
            .zip(grid.nodes())
            .zip(grid.weights())
            .map(|((p, x), w)| w * (p - logsob_extremal(lambda, d, (x - b) * (x - b))).powi(2))
            .sum()
    };
    match grid.kind() {
        GridKind::Line { .. } => {
            let centroid: f64 = psi
                .iter()
                .zip(grid.nodes())
                .zip(grid.weights())
                .map(|((p, x), w)| w * p * p * x)
                .sum();
            let half = 5.0 * lambda;
            Ok(optimize::scan_then_golden(
                sq,
                centroid - half,
                centroid + half,
                CENTER_SCAN,
                CENTER_TOL,
            ))
        }
        GridKind::Radial { .. } => Ok(Minimum { x: 0.0, value: sq(0.0) }),
        GridKind::Counting => Err(Error::Unsupported("log-Sobolev on a counting grid".into())),
    }
}

pub fn logsob_stability_term(psi: &[f64], grid: &Grid, lambda: f64) -> Result<f64> {
    logsob_stability_fit(psi, grid, lambda).map(|m| m.value)
}

/// `Σ wᵢ (V(xᵢ) + T ln ρᵢ) ρᵢ`.
pub fn gibbs_functional(rho: &DensityOnGrid<'_>, potential: &Potential, temperature: f64) -> Result<f64> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return invalid(format!("temperature must be positive, got {temperature}"));
    }
    let v = rho.grid().sample(potential)?;
    Ok(rho
        .values()
        .iter()
        .zip(&v)
        .zip(rho.grid().weights())
        .map(|((&r, &v), w)| {
            if r > 0.0 {
                w * (v + temperature * r.ln()) * r
            } else {
                0.0
            }
        })
        .sum())
}

/// `D(ρ‖ρ0) − ½‖ρ − ρ0‖₁²`.
pub fn ckp_gap(rho: &DensityOnGrid<'_>, rho0: &DensityOnGrid<'_>) -> Result<f64> {
    let kl = quadrature::relative_entropy(rho, rho0)?;
    let l1 = quadrature::l1_distance(rho, rho0)?;
    if kl.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(kl - 0.5 * l1 * l1)
}

/// `2‖√f − √g‖₂ − ‖f − g‖₁`.
pub fn sqrt_l1_gap(f: &DensityOnGrid<'_>, g: &DensityOnGrid<'_>) -> Result<f64> {
    let l1 = quadrature::l1_distance(f, g)?;
    let l2: f64 = f
        .values()
        .iter()
        .zip(g.values())
        .zip(f.grid().weights())
        .map(|((a, b), w)| w * (a.sqrt() - b.sqrt()).powi(2))
        .sum();
    Ok(2.0 * l2.sqrt() - l1)
}

/// `(1 + ½ ln(πt)) − ½ ln(4πt)`, the per-dimension gain of the sharp constant
/// over the one obtained from the heat trace.
pub fn sharp_vs_gt_margin(t: f64) -> f64 {
    (1.0 + 0.5 * (PI * t).ln()) - 0.5 * (4.0 * PI * t).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoldenThompson {
    /// `Σ_{E_n < E_cut} e^{−tE_n}`; radial potentials only count s-states.
    pub lhs_truncated: f64,
    /// `(4πt)^{−d/2} ∫ e^{−tV}`.
    pub rhs: f64,
    pub sharp_vs_gt_margin: f64,
    pub n_terms: usize,
    /// Fewer than five states were found below the cutoff.
    pub warning: bool,
}

/// Truncated heat trace against the Golden–Thompson bound.
pub fn golden_thompson_check(potential: &Potential, t: f64, numerics: &Numerics) -> Result<GoldenThompson> {
    check_t(t)?;
    let d = potential.dimension();
    let mut lhs = 1.0;
    let mut ln_z = 0.0;
    let mut n_terms = usize::MAX;
    for f in potential.factors() {
        let grid = grid_for(&f, t, numerics)?;
        let probe = eigensolve::assemble(&f, &grid)?;
        let e0 = eigensolve::lowest_eigenvalues(&probe, 1, numerics.tol)?[0];
        let k = probe
            .sturm_count(e0 + TRACE_CUTOFF / t)
            .clamp(1, MAX_TRACE_TERMS.min(probe.size()));
        let eigenvalues = if numerics.refine {
            let fine = eigensolve::assemble(&f, &grid.refined()?)?;
            let coarse = eigensolve::lowest_eigenvalues(&probe, k, numerics.tol)?;
            let fine = eigensolve::lowest_eigenvalues(&fine, k, numerics.tol)?;
            coarse.iter().zip(&fine).map(|(&c, &f)| richardson(c, f)).collect()
        } else {
            eigensolve::lowest_eigenvalues(&probe, k, numerics.tol)?
        };
        lhs *= eigenvalues.iter().map(|e| (-t * e).exp()).sum::<f64>();
        ln_z += if numerics.refine {
            richardson(
                quadrature::log_partition(&f, t, &grid)?,
                quadrature::log_partition(&f, t, &grid.refined()?)?,
            )
        } else {
            quadrature::log_partition(&f, t, &grid)?
        };
        n_terms = n_terms.min(k);
    }
    let rhs = (ln_z - 0.5 * d as f64 * (4.0 * PI * t).ln()).exp();
    Ok(GoldenThompson {
        lhs_truncated: lhs,
        rhs,
        sharp_vs_gt_margin: sharp_vs_gt_margin(t),
        n_terms,
        warning: n_terms < 5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn harmonic_t1_equality() {
        let r = keller_deficit(&Potential::harmonic(1.0).unwrap(), 1.0, &Numerics::default()).unwrap();
        assert!(r.deficit.abs() < 2e-5, "deficit {}", r.deficit);
        assert!(r.stability_distance.is_none());
    }

    #[test]
    fn harmonic_t2_closed_form() {
        let r = evaluate(&Potential::harmonic(1.0).unwrap(), 2.0, &Numerics::default()).unwrap();
        let expected = 0.5 - 0.5 * 2.0_f64.ln();
        assert!((r.deficit - expected).abs() < 1e-4, "deficit {}", r.deficit);
        let s = r.stability_distance.unwrap();
        assert!((s - oracle::centered_gaussian_l1(0.5, 1.0)).abs() < 1e-5, "S = {s}");
        assert!(r.b_opt.unwrap().abs() < 1e-6);
        assert!(r.ratio.unwrap() > 0.0);
    }

    #[test]
    fn scaled_harmonic_off_center() {
        let v = Potential::scaled_harmonic(0.7, vec![1.3], 4.0).unwrap();
        let r = evaluate(&v, 0.7, &Numerics::default()).unwrap();
        assert!(r.deficit.abs() < 2e-5);
        assert!(r.stability_distance.unwrap() < 1e-6);
        assert!((r.b_opt.unwrap() - 1.3).abs() < 1e-4);
        assert!(r.ratio.is_none());
    }

    #[test]
    fn separable_adds_factors() {
        let v = Potential::separable(vec![
            Potential::scaled_harmonic(1.0, vec![0.0], 0.0).unwrap(),
            Potential::scaled_harmonic(1.0, vec![1.0], 2.0).unwrap(),
        ])
        .unwrap();
        let r = evaluate(&v, 1.0, &Numerics::default()).unwrap();
        assert!(r.deficit.abs() < 4e-5);
        assert!((r.e0 - 4.0).abs() < 1e-4);
        assert!(r.stability_distance.is_none());
        assert!(stability_distance(&v, 1.0, &Numerics::default()).is_err());
    }

    #[test]
    fn refinement_reports_error_estimate() {
        let r = keller_deficit(&Potential::quartic(1.0).unwrap(), 1.0, &Numerics::default().refined())
            .unwrap();
        let est = r.numerics.err_estimate.unwrap();
        assert!(est > 0.0 && est < 1e-4);
    }

    #[test]
    fn logsob_and_ckp_basics() {
        let g = Grid::counting(2).unwrap();
        let p = DensityOnGrid::new(vec![0.5, 0.5], &g).unwrap();
        let q = DensityOnGrid::new(vec![0.25, 0.75], &g).unwrap();
        let gap = ckp_gap(&p, &q).unwrap();
        assert!((gap - (0.5 * (4.0_f64 / 3.0).ln() - 0.125)).abs() < 1e-14);
        assert_eq!(ckp_gap(&p, &p).unwrap(), 0.0);
        let a = DensityOnGrid::new(vec![1.0, 0.0], &g).unwrap();
        let b = DensityOnGrid::new(vec![0.0, 1.0], &g).unwrap();
        assert!((sqrt_l1_gap(&a, &b).unwrap() - (2.0 * 2.0_f64.sqrt() - 2.0)).abs() < 1e-14);
        assert_eq!(sqrt_l1_gap(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn margin_constant() {
        for t in [0.1, 1.0, 7.0] {
            assert!((sharp_vs_gt_margin(t) - (1.0 - 2.0_f64.ln())).abs() < 1e-14);
        }
    }

    #[test]
    fn logsob_rejects_bad_input() {
        let g = Grid::line(-3.0, 3.0, 101).unwrap();
        assert!(logsob_deficit(&vec![1.0; 101], &g, 1.0).is_err());
        let mut psi = vec![1.0 / 6.0_f64.sqrt(); 101];
        psi[3] = -0.1;
        assert!(matches!(logsob_deficit(&psi, &g, 1.0), Err(Error::Negative { .. })));
        assert!(logsob_deficit(&psi, &g, 0.0).is_err());
    }

    #[test]
    fn gibbs_functional_attains_minus_t_ln_z() {
        let v = Potential::quartic(1.0).unwrap();
        let g = Grid::line(-4.0, 4.0, 2001).unwrap();
        let (rho, ln_z) = quadrature::gibbs_weights(&v, 2.0, &g).unwrap();
        let rho = DensityOnGrid::new(rho, &g).unwrap();
        let f = gibbs_functional(&rho, &v, 0.5).unwrap();
        assert!((f + 0.5 * ln_z).abs() < 1e-10);
    }
}

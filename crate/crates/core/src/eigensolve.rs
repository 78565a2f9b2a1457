//! Three-point discretization of `-Δ + V` and its lowest eigenpairs.
//!
//! The discrete quadratic form is `Q(u) = Σ c_{i+½}(u_{i+1} − u_i)² + Σ mᵢ Vᵢ uᵢ²`
//! with metric `mᵢ` equal to the grid weights. On a line the outer nodes carry
//! Dirichlet conditions; on a radial grid the origin is a zero-flux node and
//! the outer node is Dirichlet. The stored matrix is the symmetrization
//! `M^{-1/2} K M^{-1/2}`, so its eigenvalues are those of `-Δ_h + V`.

use crate::discretize::{Grid, GridKind};
use crate::error::{invalid, Error, Result};
use crate::potential::Potential;

/// Default bisection tolerance on eigenvalues.
pub const EIGEN_TOL: f64 = 1e-10;
/// Residual tolerance for inverse iteration.
pub const RESIDUAL_TOL: f64 = 1e-8;
const MAX_BISECTIONS: usize = 200;

/// Symmetrized tridiagonal operator on the active (non-Dirichlet) nodes.
#[derive(Clone, Debug)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
    metric_weights: Vec<f64>,
    /// Grid index of the first active node.
    first: usize,
    grid: Grid,
}

/// Lowest eigenvalues plus the ground state on the full grid.
#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub eigenvalues: Vec<f64>,
    /// Samples on every grid node (zero on Dirichlet nodes), `Σ wᵢψᵢ² = 1`.
    pub ground_state: Vec<f64>,
    /// `‖Hψ − E₀ψ‖` in the weighted norm.
    pub residual: f64,
    pub grid: Grid,
}

impl TridiagonalOperator {
    /// Builds the operator from potential samples on every grid node.
    pub fn from_samples(grid: &Grid, potential: &[f64]) -> Result<Self> {
        if potential.len() != grid.len() {
            return Err(Error::LengthMismatch(potential.len(), grid.len()));
        }
        let n = grid.len();
        let first = match grid.kind() {
            GridKind::Line { .. } => 1,
            GridKind::Radial { .. } => 0,
            GridKind::Counting => {
                return Err(Error::Unsupported("operator on a counting grid".into()))
            }
        };
        let last = n - 1;
        let c = grid.edge_weights();
        let w = grid.weights();
        let m: Vec<f64> = w[first..last].to_vec();
        let diagonal: Vec<f64> = (first..last)
            .enumerate()
            .map(|(k, i)| {
                let left = if i > 0 { c[i - 1] } else { 0.0 };
                (left + c[i]) / m[k] + potential[i]
            })
            .collect();
        let offdiagonal: Vec<f64> = (first..last - 1)
            .enumerate()
            .map(|(k, i)| -c[i] / (m[k] * m[k + 1]).sqrt())
            .collect();
        Ok(Self {
            diagonal,
            offdiagonal,
            metric_weights: m,
            first,
            grid: grid.clone(),
        })
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    pub fn metric_weights(&self) -> &[f64] {
        &self.metric_weights
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Number of unknowns.
    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    fn pivot_floor(&self) -> f64 {
        let emax = self
            .offdiagonal
            .iter()
            .fold(1.0_f64, |acc, e| acc.max(e * e));
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `mu` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, mu: f64) -> usize {
        let floor = self.pivot_floor();
        let mut count = 0;
        let mut q = self.diagonal[0] - mu;
        for i in 0.. {
            if q.abs() < floor {
                q = -floor;
            }
            if q < 0.0 {
                count += 1;
            }
            if i + 1 == self.diagonal.len() {
                break;
            }
            let e = self.offdiagonal[i];
            q = (self.diagonal[i + 1] - mu) - e * e / q;
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.size();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let el = if i > 0 { self.offdiagonal[i - 1].abs() } else { 0.0 };
            let er = if i + 1 < n { self.offdiagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - el - er);
            hi = hi.max(self.diagonal[i] + el + er);
        }
        let pad = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
        (lo - pad, hi + pad)
    }

    /// Applies the symmetrized operator.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut y = self.diagonal[i] * x[i];
                if i > 0 {
                    y += self.offdiagonal[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiagonal[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Solves `(A − σ) y = b` by LDLᵀ; `None` if a pivot is not positive.
    fn shifted_solve(&self, sigma: f64, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.size();
        let mut d = vec![0.0; n];
        let mut l = vec![0.0; n.saturating_sub(1)];
        d[0] = self.diagonal[0] - sigma;
        for i in 1..n {
            if !(d[i - 1] > 0.0 && d[i - 1].is_finite()) {
                return None;
            }
            l[i - 1] = self.offdiagonal[i - 1] / d[i - 1];
            d[i] = self.diagonal[i] - sigma - l[i - 1] * self.offdiagonal[i - 1];
        }
        if !(d[n - 1] > 0.0 && d[n - 1].is_finite()) {
            return None;
        }
        let mut y = b.to_vec();
        for i in 1..n {
            y[i] -= l[i - 1] * y[i - 1];
        }
        for i in 0..n {
            y[i] /= d[i];
        }
        for i in (0..n - 1).rev() {
            y[i] -= l[i] * y[i + 1];
        }
        Some(y)
    }
}

/// Assembles `-Δ_h + V` for a potential on a compatible grid.
pub fn assemble(potential: &Potential, grid: &Grid) -> Result<TridiagonalOperator> {
    let v = grid.sample(potential)?;
    TridiagonalOperator::from_samples(grid, &v)
}

/// The `k` smallest eigenvalues by Sturm-count bisection.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize, tol: f64) -> Result<Vec<f64>> {
    let n = op.size();
    if k == 0 || k > n {
        return invalid(format!("k = {k} outside 1..={n}"));
    }
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be positive, got {tol}"));
    }
    let (glo, ghi) = op.gershgorin();
    let mut out = Vec::with_capacity(k);
    let mut floor = glo;
    for j in 0..k {
        let mut lo = floor;
        let mut hi = ghi;
        let mut iterations = 0;
        while hi - lo > tol {
            if iterations == MAX_BISECTIONS {
                return Err(Error::NoConvergence(format!(
                    "eigenvalue {j} after {MAX_BISECTIONS} bisections, width {}",
                    hi - lo
                )));
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if op.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            iterations += 1;
        }
        let lambda = 0.5 * (lo + hi);
        out.push(lambda);
        floor = lo;
    }
    Ok(out)
}

/// Ground state by shifted inverse iteration started from a positive vector.
pub fn ground_state(op: &TridiagonalOperator, e0: f64) -> Result<SpectralResult> {
    let n = op.size();
    let mut gap = 1e-8 * e0.abs().max(1.0);
    let mut phi = vec![1.0 / (n as f64).sqrt(); n];
    let mut solved = false;
    let mut residual = f64::INFINITY;
    'shifts: for _ in 0..=3 {
        let sigma = e0 - gap;
        for _ in 0..50 {
            let Some(mut y) = op.shifted_solve(sigma, &phi) else {
                gap *= 10.0;
                continue 'shifts;
            };
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                gap *= 10.0;
                continue 'shifts;
            }
            y.iter_mut().for_each(|v| *v /= norm);
            phi = y;
            let r = op
                .apply(&phi)
                .iter()
                .zip(&phi)
                .map(|(a, p)| (a - e0 * p).powi(2))
                .sum::<f64>()
                .sqrt();
            residual = r;
            if r <= RESIDUAL_TOL {
                solved = true;
                break 'shifts;
            }
        }
        break;
    }
    if !residual.is_finite() {
        return Err(Error::Singular { shift: e0 - gap });
    }
    if !solved {
        return Err(Error::NoConvergence(format!(
            "inverse iteration residual {residual}"
        )));
    }
    if phi.iter().sum::<f64>() < 0.0 {
        phi.iter_mut().for_each(|v| *v = -*v);
    }
    let grid = op.grid.clone();
    let mut psi = vec![0.0; grid.len()];
    for (k, p) in phi.iter().enumerate() {
        psi[op.first + k] = (p / op.metric_weights[k].sqrt()).max(0.0);
    }
    let norm2: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    let s = norm2.sqrt();
    psi.iter_mut().for_each(|v| *v /= s);
    Ok(SpectralResult {
        eigenvalues: vec![e0],
        ground_state: psi,
        residual,
        grid,
    })
}

/// `k` lowest eigenvalues together with the ground state.
pub fn solve(op: &TridiagonalOperator, k: usize, tol: f64) -> Result<SpectralResult> {
    let eigenvalues = lowest_eigenvalues(op, k, tol)?;
    let mut result = ground_state(op, eigenvalues[0])?;
    result.eigenvalues = eigenvalues;
    Ok(result)
}

/// Discrete `∫ |∇ψ|² + V ψ²` for a normalized `ψ` sampled on every node.
pub fn rayleigh_quotient(psi: &[f64], potential: &Potential, grid: &Grid) -> Result<f64> {
    if psi.len() != grid.len() {
        return Err(Error::LengthMismatch(psi.len(), grid.len()));
    }
    let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm });
    }
    let v = grid.sample(potential)?;
    let kinetic = crate::quadrature::dirichlet_energy(psi, grid)?;
    let pot: f64 = psi
        .iter()
        .zip(grid.weights())
        .zip(&v)
        .map(|((p, w), v)| w * v * p * p)
        .sum();
    Ok(kinetic + pot)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Family;
    use std::f64::consts::PI;

    fn harmonic_op() -> TridiagonalOperator {
        let g = Grid::line(-10.0, 10.0, 2001).unwrap();
        assemble(&Potential::harmonic(1.0).unwrap(), &g).unwrap()
    }

    #[test]
    fn harmonic_lowest_four() {
        // E_n error is −h²(6n² + 6n + 3)/48, so the box is kept tight
        let g = Grid::line(-7.0, 7.0, 2001).unwrap();
        let op = assemble(&Potential::harmonic(1.0).unwrap(), &g).unwrap();
        let ev = lowest_eigenvalues(&op, 4, EIGEN_TOL).unwrap();
        for (k, e) in ev.iter().enumerate() {
            assert!((e - (2 * k + 1) as f64).abs() < 1e-4, "E{k} = {e}");
        }
        assert!((ev[0] - 1.0).abs() < 1e-5);
        assert!(ev.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dirichlet_laplacian_sine_mode() {
        let errs: Vec<f64> = [201, 401]
            .iter()
            .map(|&n| {
                let g = Grid::line(0.0, PI, n).unwrap();
                let op = TridiagonalOperator::from_samples(&g, &vec![0.0; n]).unwrap();
                (lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0] - 1.0).abs()
            })
            .collect();
        assert!(errs[0] < 1e-4);
        assert!(errs[0] / errs[1] > 3.9 && errs[0] / errs[1] < 4.1);
    }

    #[test]
    fn radial_harmonic_three_dimensions() {
        let g = Grid::radial(10.0, 3, 2000).unwrap();
        let v = Potential::radial(Family::Harmonic { omega: 1.0 }, 3).unwrap();
        let e = lowest_eigenvalues(&assemble(&v, &g).unwrap(), 1, EIGEN_TOL).unwrap()[0];
        assert!((e - 3.0).abs() < 1e-4, "E0 = {e}");
    }

    #[test]
    fn radial_harmonic_two_dimensions() {
        let g = Grid::radial(10.0, 2, 2000).unwrap();
        let v = Potential::radial(Family::Harmonic { omega: 1.0 }, 2).unwrap();
        let e = lowest_eigenvalues(&assemble(&v, &g).unwrap(), 2, EIGEN_TOL).unwrap();
        // s-wave levels of the 2D oscillator: 2, 6
        assert!((e[0] - 2.0).abs() < 1e-4, "E0 = {}", e[0]);
        assert!((e[1] - 6.0).abs() < 1e-3, "E1 = {}", e[1]);
    }

    #[test]
    fn harmonic_ground_state_is_gaussian() {
        let op = harmonic_op();
        let e0 = lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0];
        let gs = ground_state(&op, e0).unwrap();
        let c = PI.powf(-0.25);
        let sup = gs
            .grid
            .nodes()
            .iter()
            .zip(&gs.ground_state)
            .map(|(x, p)| (p - c * (-x * x / 2.0).exp()).abs())
            .fold(0.0, f64::max);
        assert!(sup < 1e-4, "sup error {sup}");
        let norm: f64 = gs
            .ground_state
            .iter()
            .zip(gs.grid.weights())
            .map(|(p, w)| w * p * p)
            .sum();
        assert!((norm - 1.0).abs() < 1e-10);
        assert!(gs.ground_state.iter().all(|&p| p >= 0.0));
        assert!(gs.residual <= RESIDUAL_TOL);
        let rq = rayleigh_quotient(&gs.ground_state, &Potential::harmonic(1.0).unwrap(), &gs.grid)
            .unwrap();
        assert!((rq - e0).abs() < 10.0 * EIGEN_TOL, "rq - e0 = {}", rq - e0);
    }

    #[test]
    fn k_out_of_range() {
        let g = Grid::line(-1.0, 1.0, 64).unwrap();
        let op = TridiagonalOperator::from_samples(&g, &vec![0.0; 64]).unwrap();
        assert!(lowest_eigenvalues(&op, 0, EIGEN_TOL).is_err());
        assert!(lowest_eigenvalues(&op, 63, EIGEN_TOL).is_err());
        assert!(lowest_eigenvalues(&op, 62, EIGEN_TOL).is_ok());
    }

    #[test]
    fn first_eigenvalue_is_the_minimum() {
        let ev = lowest_eigenvalues(&harmonic_op(), 6, EIGEN_TOL).unwrap();
        let min = ev.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(ev[0], min);
    }

    #[test]
    fn rayleigh_rejects_unnormalized() {
        let g = Grid::line(-5.0, 5.0, 101).unwrap();
        let psi = vec![1.0; 101];
        assert!(matches!(
            rayleigh_quotient(&psi, &Potential::harmonic(1.0).unwrap(), &g),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn radial_operator_on_line_potential_rejected() {
        let g = Grid::radial(5.0, 3, 101).unwrap();
        assert!(assemble(&Potential::harmonic(1.0).unwrap(), &g).is_err());
    }

    #[test]
    fn gaussian_trial_is_variational_upper_bound() {
        let v = Potential::harmonic(1.0).unwrap();
        let op = harmonic_op();
        let e0 = lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0];
        let g = op.grid();
        let mut psi: Vec<f64> = g.nodes().iter().map(|x| (-x * x / 2.0).exp()).collect();
        let n = g.len();
        psi[0] = 0.0;
        psi[n - 1] = 0.0;
        let norm: f64 = psi.iter().zip(g.weights()).map(|(p, w)| w * p * p).sum();
        psi.iter_mut().for_each(|p| *p /= norm.sqrt());
        assert!(rayleigh_quotient(&psi, &v, g).unwrap() >= e0 - 1e-8);
    }

    #[test]
    fn two_level_perturbation() {
        // (E0 + ε²E1)/(1 + ε²) with ε = 0.1, E0 = 1, E1 = 3
        let v = Potential::harmonic(1.0).unwrap();
        let op = harmonic_op();
        let g = op.grid().clone();
        let e0 = lowest_eigenvalues(&op, 1, EIGEN_TOL).unwrap()[0];
        let psi0 = ground_state(&op, e0).unwrap().ground_state;
        let c = (2.0 / PI.sqrt()).sqrt();
        let mut psi1: Vec<f64> = g.nodes().iter().map(|x| c * x * (-x * x / 2.0).exp()).collect();
        let n = g.len();
        psi1[0] = 0.0;
        psi1[n - 1] = 0.0;
        let mut trial: Vec<f64> = psi0.iter().zip(&psi1).map(|(a, b)| a + 0.1 * b).collect();
        let norm: f64 = trial.iter().zip(g.weights()).map(|(p, w)| w * p * p).sum();
        trial.iter_mut().for_each(|p| *p /= norm.sqrt());
        let rq = rayleigh_quotient(&trial, &v, &g).unwrap();
        assert!((rq - 1.03 / 1.01).abs() < 1e-3, "rq = {rq}");
    }
}

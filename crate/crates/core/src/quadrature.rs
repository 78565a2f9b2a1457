//! Integrals of grid functions under the grid's own discrete measure.

use crate::discretize::Grid;
use crate::error::{invalid, Error, Result};
use crate::potential::Potential;

/// Gibbs or trial densities below this value count as zero in entropies.
pub const DENSITY_FLOOR: f64 = 1e-300;

/// A nonnegative grid function with unit mass `Σ wᵢρᵢ = 1`.
#[derive(Clone, Debug)]
pub struct DensityOnGrid<'g> {
    values: Vec<f64>,
    grid: &'g Grid,
}

impl<'g> DensityOnGrid<'g> {
    /// Validates nonnegativity and renormalizes to unit mass.
    pub fn new(mut values: Vec<f64>, grid: &'g Grid) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch(values.len(), grid.len()));
        }
        if let Some((idx, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::Negative { idx, value });
        }
        let mass = integrate(&values, grid)?;
        if !(mass > 0.0 && mass.is_finite()) {
            return invalid(format!("density mass must be positive, got {mass}"));
        }
        values.iter_mut().for_each(|v| *v /= mass);
        Ok(Self { values, grid })
    }

    /// Squares of a real amplitude, renormalized.
    pub fn from_amplitude(psi: &[f64], grid: &'g Grid) -> Result<Self> {
        Self::new(psi.iter().map(|p| p * p).collect(), grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &'g Grid {
        self.grid
    }

    fn same_grid(&self, other: &DensityOnGrid<'_>) -> Result<()> {
        if std::ptr::eq(self.grid, other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// `Σ wᵢ fᵢ`.
pub fn integrate(values: &[f64], grid: &Grid) -> Result<f64> {
    if values.len() != grid.len() {
        return Err(Error::LengthMismatch(values.len(), grid.len()));
    }
    Ok(values.iter().zip(grid.weights()).map(|(f, w)| f * w).sum())
}

/// Normalized Gibbs weights `e^{−tV}/Z` on the grid together with `ln Z`.
///
/// The grid minimum of `tV` is factored out before exponentiating and added
/// back to `ln Z`.
pub fn gibbs_weights(potential: &Potential, t: f64, grid: &Grid) -> Result<(Vec<f64>, f64)> {
    if !(t.is_finite() && t > 0.0) {
        return invalid(format!("t must be positive, got {t}"));
    }
    let v = grid.sample(potential)?;
    let shift = v.iter().map(|&x| t * x).fold(f64::INFINITY, f64::min);
    let mut rho: Vec<f64> = v.iter().map(|&x| (-(t * x - shift)).exp()).collect();
    let z = integrate(&rho, grid)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Underflow);
    }
    rho.iter_mut().for_each(|r| *r /= z);
    Ok((rho, z.ln() - shift))
}

/// `ln Σ wᵢ e^{−tV(xᵢ)}`.
pub fn log_partition(potential: &Potential, t: f64, grid: &Grid) -> Result<f64> {
    gibbs_weights(potential, t, grid).map(|(_, ln_z)| ln_z)
}

/// `Σ wᵢ |ρ1ᵢ − ρ2ᵢ|`.
pub fn l1_distance(rho1: &DensityOnGrid<'_>, rho2: &DensityOnGrid<'_>) -> Result<f64> {
    rho1.same_grid(rho2)?;
    Ok(rho1
        .values
        .iter()
        .zip(&rho2.values)
        .zip(rho1.grid.weights())
        .map(|((a, b), w)| w * (a - b).abs())
        .sum())
}

/// `Σ wᵢ ρᵢ ln(ρᵢ/ρ0ᵢ)`; `+∞` when `ρ` charges a node where `ρ0` vanishes.
pub fn relative_entropy(rho: &DensityOnGrid<'_>, rho0: &DensityOnGrid<'_>) -> Result<f64> {
    rho.same_grid(rho0)?;
    let mut sum = 0.0;
    for ((&p, &q), &w) in rho.values.iter().zip(&rho0.values).zip(rho.grid.weights()) {
        if p <= 0.0 || w == 0.0 {
            continue;
        }
        if q < DENSITY_FLOOR {
            return Ok(f64::INFINITY);
        }
        sum += w * p * (p / q).ln();
    }
    Ok(sum)
}

/// First-difference Dirichlet form `Σ c_{i+½}(ψ_{i+1} − ψᵢ)²`.
pub fn dirichlet_energy(psi: &[f64], grid: &Grid) -> Result<f64> {
    if psi.len() != grid.len() {
        return Err(Error::LengthMismatch(psi.len(), grid.len()));
    }
    if grid.kind() == crate::discretize::GridKind::Counting {
        return Err(Error::Unsupported("gradient on a counting grid".into()));
    }
    Ok(grid
        .edge_weights()
        .iter()
        .zip(psi.windows(2))
        .map(|(c, p)| c * (p[1] - p[0]).powi(2))
        .sum())
}

/// `Σ wᵢ ψᵢ² ln ψᵢ²` with `0·ln 0 = 0`.
pub fn entropy_term(psi: &[f64], grid: &Grid) -> Result<f64> {
    if psi.len() != grid.len() {
        return Err(Error::LengthMismatch(psi.len(), grid.len()));
    }
    let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm });
    }
    Ok(psi
        .iter()
        .zip(grid.weights())
        .map(|(p, w)| {
            let r = p * p;
            if r > 0.0 {
                w * r * r.ln()
            } else {
                0.0
            }
        })
        .sum())
}

/// `Σ wᵢ ρᵢ ln ρᵢ` for a density.
pub fn density_entropy(rho: &DensityOnGrid<'_>) -> f64 {
    rho.values
        .iter()
        .zip(rho.grid.weights())
        .map(|(&r, w)| if r > 0.0 { w * r * r.ln() } else { 0.0 })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::Family;
    use std::f64::consts::PI;

    #[test]
    fn integrate_examples() {
        let g = Grid::line(-1.0, 1.0, 101).unwrap();
        assert!((integrate(&vec![1.0; 101], &g).unwrap() - 2.0).abs() < 1e-12);
        let g = Grid::line(-10.0, 10.0, 2001).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|x| (-x * x).exp()).collect();
        assert!((integrate(&f, &g).unwrap() - PI.sqrt()).abs() < 1e-8);
        let g = Grid::radial(2.0, 3, 2000).unwrap();
        let vol = 4.0 / 3.0 * PI * 8.0;
        assert!((integrate(&vec![1.0; 2000], &g).unwrap() - vol).abs() < 1e-3);
        assert!(matches!(
            integrate(&[1.0, 2.0], &g),
            Err(Error::LengthMismatch(2, 2000))
        ));
    }

    #[test]
    fn log_partition_examples() {
        let g = Grid::line(-10.0, 10.0, 2001).unwrap();
        let h = Potential::harmonic(1.0).unwrap();
        assert!((log_partition(&h, 1.0, &g).unwrap() - 0.5 * PI.ln()).abs() < 1e-10);
        assert!((log_partition(&h, 2.0, &g).unwrap() - 0.5 * (PI / 2.0).ln()).abs() < 1e-10);
        for &(t, d) in &[(0.5, 2usize), (2.0, 3)] {
            let v = Potential::scaled_harmonic(t, vec![0.0; d], 0.0).unwrap();
            let g = Grid::radial(12.0, d, 4000).unwrap();
            let expected = 0.5 * d as f64 * (PI * t).ln();
            let got = log_partition(&v, t, &g).unwrap();
            assert!((got - expected).abs() < 1e-5, "d = {d}: {got} vs {expected}");
        }
    }

    #[test]
    fn log_partition_survives_large_offsets() {
        let g = Grid::line(-10.0, 10.0, 2001).unwrap();
        let h = Potential::harmonic(1.0).unwrap().translate_and_shift(&[0.0], 2000.0).unwrap();
        let lnz = log_partition(&h, 1.0, &g).unwrap();
        assert!((lnz - (0.5 * PI.ln() - 2000.0)).abs() < 1e-9);
    }

    #[test]
    fn l1_examples() {
        let g = Grid::counting(4).unwrap();
        let a = DensityOnGrid::new(vec![0.5, 0.5, 0.0, 0.0], &g).unwrap();
        let b = DensityOnGrid::new(vec![0.0, 0.0, 0.3, 0.7], &g).unwrap();
        assert_eq!(l1_distance(&a, &a).unwrap(), 0.0);
        assert!((l1_distance(&a, &b).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn relative_entropy_two_point() {
        let g = Grid::counting(2).unwrap();
        let p = DensityOnGrid::new(vec![0.5, 0.5], &g).unwrap();
        let q = DensityOnGrid::new(vec![0.25, 0.75], &g).unwrap();
        let expected = 0.5 * (4.0_f64 / 3.0).ln();
        assert!((relative_entropy(&p, &q).unwrap() - expected).abs() < 1e-14);
        assert_eq!(relative_entropy(&p, &p).unwrap(), 0.0);
        let z = DensityOnGrid::new(vec![1.0, 0.0], &g).unwrap();
        assert_eq!(relative_entropy(&p, &z).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&z, &p).unwrap().is_finite());
    }

    #[test]
    fn grid_mismatch_rejected() {
        let g1 = Grid::counting(2).unwrap();
        let g2 = Grid::counting(3).unwrap();
        let a = DensityOnGrid::new(vec![1.0, 1.0], &g1).unwrap();
        let b = DensityOnGrid::new(vec![1.0, 1.0, 1.0], &g2).unwrap();
        assert_eq!(l1_distance(&a, &b), Err(Error::GridMismatch));
        assert_eq!(relative_entropy(&a, &b), Err(Error::GridMismatch));
    }

    #[test]
    fn density_rejects_negative() {
        let g = Grid::counting(2).unwrap();
        assert!(matches!(
            DensityOnGrid::new(vec![1.0, -0.1], &g),
            Err(Error::Negative { idx: 1, .. })
        ));
        assert!(DensityOnGrid::new(vec![0.0, 0.0], &g).is_err());
    }

    #[test]
    fn dirichlet_energy_examples() {
        let g = Grid::line(-10.0, 10.0, 8001).unwrap();
        assert_eq!(dirichlet_energy(&vec![3.0; 8001], &g).unwrap(), 0.0);
        let c = PI.powf(-0.25);
        let psi: Vec<f64> = g.nodes().iter().map(|x| c * (-x * x / 2.0).exp()).collect();
        assert!((dirichlet_energy(&psi, &g).unwrap() - 0.5).abs() < 1e-6);

        let errs: Vec<f64> = [201, 401]
            .iter()
            .map(|&n| {
                let g = Grid::line(0.0, PI, n).unwrap();
                let psi: Vec<f64> = g.nodes().iter().map(|x| x.sin() * (2.0 / PI).sqrt()).collect();
                (dirichlet_energy(&psi, &g).unwrap() - 1.0).abs()
            })
            .collect();
        assert!(errs[0] < 1e-4 && errs[0] / errs[1] > 3.9);
    }

    #[test]
    fn entropy_examples() {
        let g = Grid::line(-1.0, 1.0, 2001).unwrap();
        let psi = vec![0.5_f64.sqrt(); 2001];
        assert!((entropy_term(&psi, &g).unwrap() - 0.5_f64.ln()).abs() < 1e-12);

        let gauss = |s: f64, g: &Grid| -> Vec<f64> {
            let c = PI.powf(-0.25);
            g.nodes().iter().map(|x| s.sqrt() * c * (-(s * x).powi(2) / 2.0).exp()).collect()
        };
        let g = Grid::line(-12.0, 12.0, 4001).unwrap();
        let h0 = entropy_term(&gauss(1.0, &g), &g).unwrap();
        assert!((h0 + 0.5 * (1.0 + PI.ln())).abs() < 1e-10);
        for s in [0.5, 2.0] {
            let hs = entropy_term(&gauss(s, &g), &g).unwrap();
            assert!((hs - h0 - s.ln()).abs() < 1e-8, "s = {s}");
        }
        assert!(entropy_term(&vec![1.0; 4001], &g).is_err());
    }

    #[test]
    fn radial_entropy_of_gaussian() {
        // ψ² = π^{-3/2} e^{-r²} in d = 3: ∫ψ² ln ψ² = −(3/2)(1 + ln π)
        let g = Grid::radial(10.0, 3, 4000).unwrap();
        let v = Potential::radial(Family::Harmonic { omega: 1.0 }, 3).unwrap();
        let (rho, _) = gibbs_weights(&v, 1.0, &g).unwrap();
        let psi: Vec<f64> = rho.iter().map(|r| r.sqrt()).collect();
        let h = entropy_term(&psi, &g).unwrap();
        assert!((h + 1.5 * (1.0 + PI.ln())).abs() < 1e-5, "h = {h}");
    }
}

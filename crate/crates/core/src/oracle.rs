//! Closed-form references for the harmonic family and Gaussian geometry.

use serde::Serialize;
use libm::erfc;
use std::f64::consts::{PI, SQRT_2};

/// Exact data for `V = t⁻²|x − b|² + κ` in `d` dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicReference {
    pub t: f64,
    pub dimension: usize,
    pub center: Vec<f64>,
    pub offset: f64,
    pub e0_exact: f64,
    pub ln_z_exact: f64,
    /// Variance of each coordinate of the ground-state density `ψ₀²`.
    pub ground_state_variance: f64,
}

impl HarmonicReference {
    /// Deficit assembled from the exact fields.
    pub fn deficit(&self) -> f64 {
        crate::functionals::deficit_from(self.e0_exact, self.ln_z_exact, self.t, self.dimension)
    }

    /// `ψ₀(x) = (πt)^{−d/4} e^{−|x−b|²/(2t)}`.
    pub fn ground_state(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(x, b)| (x - b).powi(2)).sum();
        (PI * self.t).powf(-(self.dimension as f64) / 4.0) * (-r2 / (2.0 * self.t)).exp()
    }
}

pub fn harmonic_reference(t: f64, d: usize, center: Vec<f64>, offset: f64) -> HarmonicReference {
    let dd = d as f64;
    HarmonicReference {
        t,
        dimension: d,
        center,
        offset,
        e0_exact: dd / t + offset,
        ln_z_exact: -t * offset + 0.5 * dd * (PI * t).ln(),
        ground_state_variance: 0.5 * t,
    }
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// L¹ distance between `(πt)^{−d/2} e^{−|x|²/t}` and its translate by a
/// vector of length `b_norm`; independent of `d`.
pub fn gaussian_l1_shift(b_norm: f64, t: f64, _d: usize) -> f64 {
    // one-dimensional marginal along the shift, σ² = t/2
    2.0 * (2.0 * normal_cdf(b_norm / (2.0 * t).sqrt()) - 1.0)
}

/// L¹ distance between centered 1D normals with standard deviations `s1`, `s2`.
pub fn centered_gaussian_l1(s1: f64, s2: f64) -> f64 {
    if s1 == s2 {
        return 0.0;
    }
    let (a, b) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
    // crossing point of the two densities
    let x = (2.0 * (b / a).ln() * a * a * b * b / (b * b - a * a)).sqrt();
    4.0 * (normal_cdf(x / a) - normal_cdf(x / b))
}

/// `Tr e^{−tH}` for `H = −Δ + ω²|x|²` in `d` dimensions.
pub fn harmonic_heat_trace(omega: f64, t: f64, d: usize) -> f64 {
    (2.0 * (t * omega).sinh()).powi(-(d as i32))
}

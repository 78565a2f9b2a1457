//! Truncation radii and uniform grids.
//!
//! Line grids carry trapezoidal weights. Radial grids carry the measure
//! `|S^{d−1}| r^{d−1} dr` with a trapezoidal outer endpoint and, at the
//! origin, the volume of the ball of radius `h/2`; the same weights serve as
//! the metric of the radial eigenproblem.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::potential::Potential;

/// Smallest admissible node count for line and radial grids.
pub const MIN_POINTS: usize = 64;

const MAX_DOUBLINGS: usize = 1 << 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GridKind {
    Line { left: f64, right: f64 },
    Radial { rmax: f64, dimension: usize },
    /// Unit weights on abstract nodes; used for discrete density fixtures.
    Counting,
}

/// Shape requested from [`build_grid`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Line,
    Radial { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    kind: GridKind,
    spacing: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Surface area of the unit sphere `S^{d−1}` in `ℝᵈ`.
pub fn sphere_area(d: usize) -> f64 {
    use std::f64::consts::PI;
    match d {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 2.0) * sphere_area(d - 2),
    }
}

impl Grid {
    /// Uniform grid on `[left, right]` with trapezoidal weights.
    pub fn line(left: f64, right: f64, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return invalid(format!("grid needs at least {MIN_POINTS} points, got {n}"));
        }
        if !(left.is_finite() && right.is_finite() && right > left) {
            return invalid(format!("invalid interval [{left}, {right}]"));
        }
        let h = (right - left) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| left + i as f64 * h).collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self {
            kind: GridKind::Line { left, right },
            spacing: h,
            nodes,
            weights,
        })
    }

    /// Uniform radial grid `rᵢ = i·h` on `[0, rmax]` in dimension `d ≥ 2`.
    pub fn radial(rmax: f64, dimension: usize, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return invalid(format!("grid needs at least {MIN_POINTS} points, got {n}"));
        }
        if dimension < 2 {
            return invalid("radial grids need d >= 2");
        }
        if !(rmax.is_finite() && rmax > 0.0) {
            return invalid(format!("invalid radius {rmax}"));
        }
        let h = rmax / (n - 1) as f64;
        let area = sphere_area(dimension);
        let dm1 = (dimension - 1) as i32;
        let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let mut weights: Vec<f64> = nodes.iter().map(|r| area * r.powi(dm1) * h).collect();
        weights[0] = area * (0.5 * h).powi(dimension as i32) / dimension as f64;
        weights[n - 1] *= 0.5;
        Ok(Self {
            kind: GridKind::Radial { rmax, dimension },
            spacing: h,
            nodes,
            weights,
        })
    }

    /// `n` nodes with unit weights.
    pub fn counting(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("counting grid needs at least one node");
        }
        Ok(Self {
            kind: GridKind::Counting,
            spacing: 1.0,
            nodes: (0..n).map(|i| i as f64).collect(),
            weights: vec![1.0; n],
        })
    }

    /// Same box with the spacing halved (`n ↦ 2n − 1`).
    pub fn refined(&self) -> Result<Self> {
        let n = 2 * self.len() - 1;
        match self.kind {
            GridKind::Line { left, right } => Grid::line(left, right, n),
            GridKind::Radial { rmax, dimension } => Grid::radial(rmax, dimension, n),
            GridKind::Counting => Err(Error::Unsupported("refining a counting grid".into())),
        }
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Spatial dimension of the measure (1 for line and counting grids).
    pub fn dimension(&self) -> usize {
        match self.kind {
            GridKind::Radial { dimension, .. } => dimension,
            _ => 1,
        }
    }

    /// Half-width of a line grid or outer radius of a radial grid.
    pub fn radius(&self) -> f64 {
        match self.kind {
            GridKind::Line { left, right } => 0.5 * (right - left),
            GridKind::Radial { rmax, .. } => rmax,
            GridKind::Counting => 0.0,
        }
    }

    /// Weight of the edge between nodes `i` and `i + 1` in the Dirichlet form
    /// `Σ c_{i+½} (u_{i+1} − u_i)²`.
    pub(crate) fn edge_weights(&self) -> Vec<f64> {
        let h = self.spacing;
        match self.kind {
            GridKind::Radial { dimension, .. } => {
                let area = sphere_area(dimension);
                (0..self.len() - 1)
                    .map(|i| area * ((i as f64 + 0.5) * h).powi(dimension as i32 - 1) / h)
                    .collect()
            }
            _ => vec![1.0 / h; self.len().saturating_sub(1)],
        }
    }

    /// Samples a potential at the grid nodes.
    pub fn sample(&self, potential: &Potential) -> Result<Vec<f64>> {
        match self.kind {
            GridKind::Line { .. } if !potential.is_radial() && potential.dimension() == 1 => {
                Ok(self.nodes.iter().map(|&x| potential.value_1d(x)).collect())
            }
            GridKind::Radial { dimension, .. }
                if potential.is_radial() && potential.dimension() == dimension =>
            {
                Ok(self.nodes.iter().map(|&r| potential.value_1d(r)).collect())
            }
            _ => Err(Error::Symmetry(format!(
                "{:?} potential in d = {} does not match grid {:?}",
                potential.symmetry(),
                potential.dimension(),
                self.kind
            ))),
        }
    }
}

/// Smallest `R` (up to bisection accuracy) such that
/// `V(x) ≥ V_min + (d + 2)·ln(1/ε)/t` at distance `R` from the symmetry
/// center, found by outward doubling followed by bisection.
pub fn truncation_radius(potential: &Potential, t: f64, epsilon: f64) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return invalid(format!("t must be positive, got {t}"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid(format!("epsilon must lie in (0, 1), got {epsilon}"));
    }
    if potential.is_separable() {
        return Err(Error::Unsupported(
            "separable potentials are truncated per factor".into(),
        ));
    }
    let d = potential.dimension() as f64;
    let log_inv = (1.0 / epsilon).ln();
    let threshold = potential.minimum() + d * log_inv / t + 2.0 * log_inv / t;
    let center = potential.symmetry_center()[0];
    let radial = potential.is_radial();
    let above = |r: f64| {
        if radial {
            potential.value_1d(r) >= threshold
        } else {
            potential.value_1d(center - r) >= threshold && potential.value_1d(center + r) >= threshold
        }
    };

    let mut hi = 1.0 / 1024.0;
    let mut doublings = 0;
    while !above(hi) {
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::NonConfining(format!(
                "no truncation radius after {MAX_DOUBLINGS} doublings"
            )));
        }
    }
    let mut lo = 0.5 * hi;
    if doublings == 0 {
        return Ok(hi);
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Uniform grid on `[−R, R]` (line) or `[0, R]` (radial).
pub fn build_grid(radius: f64, n: usize, shape: Shape) -> Result<Grid> {
    match shape {
        Shape::Line => Grid::line(-radius, radius, n),
        Shape::Radial { dimension } => Grid::radial(radius, dimension, n),
    }
}

/// Grid for a non-separable potential centered on its symmetry center.
pub fn grid_for(potential: &Potential, radius: f64, n: usize) -> Result<Grid> {
    if potential.is_separable() {
        return Err(Error::Unsupported(
            "separable potentials are gridded per factor".into(),
        ));
    }
    if potential.is_radial() {
        Grid::radial(radius, potential.dimension(), n)
    } else {
        let c = potential.symmetry_center()[0];
        Grid::line(c - radius, c + radius, n)
    }
}

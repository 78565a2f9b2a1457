//! Confining potentials.
//!
//! A [`Potential`] is a catalog family together with an affine change of
//! variables `x ↦ s²·V(s·(x − a)) + κ`. Translations, constant shifts and
//! rescalings compose inside that representation, so every derived potential
//! stays in the catalog and keeps its closed-form minimum.
//!
//! Radial potentials (d ≥ 2) are functions of the distance to their symmetry
//! center. For the whole catalog that center is the origin except for
//! [`Family::ScaledHarmonic`], whose center is a family parameter.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Catalog families. All parameters refer to the untransformed profile.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `ω²|x|²`.
    Harmonic { omega: f64 },
    /// `t⁻²|x − b|² + κ`, the family on which the sharp bound is attained.
    ScaledHarmonic {
        t_match: f64,
        center: Vec<f64>,
        offset: f64,
    },
    /// `a·x⁴` (1D).
    Quartic { a: f64 },
    /// `α·x² + β·x⁴` (1D).
    AnharmonicMix { alpha: f64, beta: f64 },
    /// `a·x⁴ − b·x²` (1D).
    DoubleWell { a: f64, b: f64 },
    /// `|x|ᵖ`, p ≥ 1.
    AbsPower { p: f64 },
    /// `Σₖ Vₖ(xₖ)` over one-dimensional factors.
    Separable { factors: Vec<Potential> },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Harmonic { .. } => "harmonic",
            Family::ScaledHarmonic { .. } => "scaled_harmonic",
            Family::Quartic { .. } => "quartic",
            Family::AnharmonicMix { .. } => "anharmonic_mix",
            Family::DoubleWell { .. } => "double_well",
            Family::AbsPower { .. } => "abs_power",
            Family::Separable { .. } => "separable",
        }
    }

    fn radial_capable(&self) -> bool {
        matches!(
            self,
            Family::Harmonic { .. } | Family::ScaledHarmonic { .. } | Family::AbsPower { .. }
        )
    }

    /// Profile as a function of the coordinate (or radius) measured from the
    /// family's own center.
    fn profile(&self, u: f64) -> f64 {
        match *self {
            Family::Harmonic { omega } => omega * omega * u * u,
            Family::ScaledHarmonic {
                t_match, offset, ..
            } => u * u / (t_match * t_match) + offset,
            Family::Quartic { a } => a * u.powi(4),
            Family::AnharmonicMix { alpha, beta } => alpha * u * u + beta * u.powi(4),
            Family::DoubleWell { a, b } => a * u.powi(4) - b * u * u,
            Family::AbsPower { p } => u.abs().powf(p),
            Family::Separable { .. } => unreachable!("separable potentials evaluate through factors"),
        }
    }

    fn profile_min(&self) -> f64 {
        match *self {
            Family::Harmonic { .. } | Family::Quartic { .. } | Family::AbsPower { .. } => 0.0,
            Family::ScaledHarmonic { offset, .. } => offset,
            Family::AnharmonicMix { alpha, beta } => {
                if alpha >= 0.0 {
                    0.0
                } else {
                    -alpha * alpha / (4.0 * beta)
                }
            }
            Family::DoubleWell { a, b } => {
                if b <= 0.0 {
                    0.0
                } else {
                    -b * b / (4.0 * a)
                }
            }
            Family::Separable { .. } => unreachable!(),
        }
    }

    /// First coordinate of the family center (1D use).
    fn center_1d(&self) -> f64 {
        match self {
            Family::ScaledHarmonic { center, .. } => center[0],
            _ => 0.0,
        }
    }
}

/// Symmetry class of a potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    Even1D,
    Radial,
    SeparableProduct,
    General1D,
}

/// `x ↦ scale²·V(scale·(x − shift)) + offset`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transform {
    pub scale: f64,
    pub shift: f64,
    pub offset: f64,
}

impl Transform {
    const IDENTITY: Transform = Transform {
        scale: 1.0,
        shift: 0.0,
        offset: 0.0,
    };

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// A confining potential in `d` dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Potential {
    family: Family,
    dimension: usize,
    symmetry: Symmetry,
    transform: Transform,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        invalid(format!("{name} must be finite, got {v}"))
    }
}

impl Potential {
    /// Validates and builds a potential.
    pub fn new(family: Family, dimension: usize, symmetry: Symmetry) -> Result<Self> {
        if dimension == 0 {
            return invalid("dimension must be positive");
        }
        match &family {
            Family::Harmonic { omega } => {
                finite("omega", *omega)?;
                if *omega <= 0.0 {
                    return Err(Error::NonConfining(format!("harmonic omega = {omega}")));
                }
            }
            Family::ScaledHarmonic {
                t_match,
                center,
                offset,
            } => {
                finite("t_match", *t_match)?;
                finite("offset", *offset)?;
                if *t_match <= 0.0 {
                    return invalid(format!("t_match must be positive, got {t_match}"));
                }
                if center.len() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        got: center.len(),
                    });
                }
                for &c in center {
                    finite("center", c)?;
                }
            }
            Family::Quartic { a } => {
                finite("a", *a)?;
                if *a <= 0.0 {
                    return Err(Error::NonConfining(format!("quartic a = {a}")));
                }
            }
            Family::AnharmonicMix { alpha, beta } => {
                finite("alpha", *alpha)?;
                finite("beta", *beta)?;
                if *beta <= 0.0 {
                    return Err(Error::NonConfining(format!("anharmonic beta = {beta}")));
                }
            }
            Family::DoubleWell { a, b } => {
                finite("a", *a)?;
                finite("b", *b)?;
                if *a <= 0.0 {
                    return Err(Error::NonConfining(format!("double well a = {a}")));
                }
            }
            Family::AbsPower { p } => {
                finite("p", *p)?;
                if *p < 1.0 {
                    return invalid(format!("abs power requires p >= 1, got {p}"));
                }
            }
            Family::Separable { factors } => {
                if factors.is_empty() {
                    return invalid("separable potential needs at least one factor");
                }
                if factors.len() != dimension {
                    return Err(Error::DimensionMismatch {
                        expected: dimension,
                        got: factors.len(),
                    });
                }
                if factors
                    .iter()
                    .any(|f| f.dimension != 1 || matches!(f.family, Family::Separable { .. }))
                {
                    return invalid("separable factors must be one-dimensional catalog potentials");
                }
            }
        }

        match (&family, symmetry) {
            (Family::Separable { .. }, Symmetry::SeparableProduct) => {}
            (Family::Separable { .. }, s) | (_, s @ Symmetry::SeparableProduct) => {
                return Err(Error::Symmetry(format!(
                    "{s:?} does not match family {}",
                    family.name()
                )))
            }
            (_, Symmetry::Radial) => {
                if dimension < 2 {
                    return Err(Error::Symmetry("radial potentials need d >= 2".into()));
                }
                if !family.radial_capable() {
                    return Err(Error::Symmetry(format!(
                        "{} is one-dimensional only",
                        family.name()
                    )));
                }
            }
            (_, Symmetry::Even1D | Symmetry::General1D) => {
                if dimension != 1 {
                    return Err(Error::Symmetry(format!(
                        "{symmetry:?} requires d = 1, got d = {dimension}"
                    )));
                }
                if symmetry == Symmetry::Even1D && family.center_1d() != 0.0 {
                    return Err(Error::Symmetry("off-center potential is not even".into()));
                }
            }
        }

        Ok(Self {
            family,
            dimension,
            symmetry,
            transform: Transform::IDENTITY,
        })
    }

    pub fn harmonic(omega: f64) -> Result<Self> {
        Self::new(Family::Harmonic { omega }, 1, Symmetry::Even1D)
    }

    pub fn quartic(a: f64) -> Result<Self> {
        Self::new(Family::Quartic { a }, 1, Symmetry::Even1D)
    }

    pub fn anharmonic_mix(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Family::AnharmonicMix { alpha, beta }, 1, Symmetry::Even1D)
    }

    pub fn double_well(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::DoubleWell { a, b }, 1, Symmetry::Even1D)
    }

    pub fn abs_power(p: f64) -> Result<Self> {
        Self::new(Family::AbsPower { p }, 1, Symmetry::Even1D)
    }

    /// `t⁻²|x − center|² + offset`; radial when `center.len() ≥ 2`.
    pub fn scaled_harmonic(t_match: f64, center: Vec<f64>, offset: f64) -> Result<Self> {
        let d = center.len();
        let symmetry = if d >= 2 {
            Symmetry::Radial
        } else if center.first().copied() == Some(0.0) {
            Symmetry::Even1D
        } else {
            Symmetry::General1D
        };
        Self::new(
            Family::ScaledHarmonic {
                t_match,
                center,
                offset,
            },
            d,
            symmetry,
        )
    }

    /// Radially symmetric member of a radial-capable family in `d ≥ 2`.
    pub fn radial(family: Family, dimension: usize) -> Result<Self> {
        Self::new(family, dimension, Symmetry::Radial)
    }

    pub fn separable(factors: Vec<Potential>) -> Result<Self> {
        let d = factors.len();
        Self::new(Family::Separable { factors }, d, Symmetry::SeparableProduct)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn is_separable(&self) -> bool {
        self.symmetry == Symmetry::SeparableProduct
    }

    pub fn is_radial(&self) -> bool {
        self.symmetry == Symmetry::Radial
    }

    /// Value at a coordinate (d = 1) or at a radius from the symmetry
    /// center (radial). Not defined for separable potentials.
    pub(crate) fn value_1d(&self, x: f64) -> f64 {
        let Transform {
            scale,
            shift,
            offset,
        } = self.transform;
        let u = if self.is_radial() {
            scale * x
        } else {
            scale * (x - shift) - self.family.center_1d()
        };
        scale * scale * self.family.profile(u) + offset
    }

    /// Evaluates the potential at one point.
    ///
    /// Radial potentials accept either a one-element radius `[r]`, `r ≥ 0`,
    /// measured from the symmetry center, or a full `d`-vector.
    pub fn value(&self, point: &[f64]) -> Result<f64> {
        match self.symmetry {
            Symmetry::Even1D | Symmetry::General1D => {
                if point.len() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: point.len(),
                    });
                }
                Ok(self.value_1d(point[0]))
            }
            Symmetry::Radial => {
                let r = if point.len() == 1 {
                    if point[0] < 0.0 {
                        return invalid(format!("radius must be nonnegative, got {}", point[0]));
                    }
                    point[0]
                } else if point.len() == self.dimension {
                    let c = self.symmetry_center();
                    point
                        .iter()
                        .zip(&c)
                        .map(|(x, c)| (x - c) * (x - c))
                        .sum::<f64>()
                        .sqrt()
                } else {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        got: point.len(),
                    });
                };
                Ok(self.value_1d(r))
            }
            Symmetry::SeparableProduct => {
                if point.len() != self.dimension {
                    return Err(Error::DimensionMismatch {
                        expected: self.dimension,
                        got: point.len(),
                    });
                }
                Ok(self
                    .factors()
                    .iter()
                    .zip(point)
                    .map(|(f, &x)| f.value_1d(x))
                    .sum())
            }
        }
    }

    /// Evaluates the potential at each point.
    pub fn eval(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        points.iter().map(|p| self.value(p)).collect()
    }

    /// Global minimum value.
    pub fn minimum(&self) -> f64 {
        match &self.family {
            Family::Separable { .. } => self.factors().iter().map(Potential::minimum).sum(),
            f => {
                let s = self.transform.scale;
                s * s * f.profile_min() + self.transform.offset
            }
        }
    }

    /// Point about which the potential is symmetric (even or radial); the
    /// origin of the natural box for general 1D potentials.
    pub fn symmetry_center(&self) -> Vec<f64> {
        match &self.family {
            Family::Separable { factors } => factors.iter().map(|f| f.symmetry_center()[0]).collect(),
            Family::ScaledHarmonic { center, .. } if self.is_radial() => {
                center.iter().map(|c| c / self.transform.scale).collect()
            }
            _ if self.is_radial() => vec![0.0; self.dimension],
            f => vec![self.transform.shift + f.center_1d() / self.transform.scale],
        }
    }

    /// One-dimensional factors of a separable potential with the outer
    /// constant folded into the first factor.
    ///
    /// Non-separable potentials return themselves as the single factor.
    pub fn factors(&self) -> Vec<Potential> {
        match &self.family {
            Family::Separable { factors } => {
                let mut out = factors.clone();
                out[0].transform.offset += self.transform.offset;
                out
            }
            _ => vec![self.clone()],
        }
    }

    /// `x ↦ V(x − a) + κ`.
    pub fn translate_and_shift(&self, a: &[f64], kappa: f64) -> Result<Potential> {
        finite("kappa", kappa)?;
        if a.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: a.len(),
            });
        }
        for &ai in a {
            finite("translation", ai)?;
        }
        let mut out = self.clone();
        match &mut out.family {
            Family::Separable { factors } => {
                for (f, &ai) in factors.iter_mut().zip(a) {
                    f.transform.shift += ai;
                    if ai != 0.0 {
                        f.symmetry = Symmetry::General1D;
                    }
                }
            }
            _ if self.is_radial() => {
                if a.iter().any(|&ai| ai != 0.0) {
                    return Err(Error::Symmetry(
                        "radial potentials only admit the zero translation".into(),
                    ));
                }
            }
            _ => {
                out.transform.shift += a[0];
                if a[0] != 0.0 {
                    out.symmetry = Symmetry::General1D;
                }
            }
        }
        out.transform.offset += kappa;
        Ok(out)
    }

    /// `x ↦ s²·V(s·x)`.
    pub fn rescale(&self, s: f64) -> Result<Potential> {
        if !(s.is_finite() && s > 0.0) {
            return invalid(format!("rescale factor must be positive, got {s}"));
        }
        let mut out = self.clone();
        if let Family::Separable { factors } = &mut out.family {
            for f in factors.iter_mut() {
                *f = f.rescale(s)?;
            }
        } else {
            out.transform.scale *= s;
            out.transform.shift /= s;
        }
        out.transform.offset *= s * s;
        Ok(out)
    }
}

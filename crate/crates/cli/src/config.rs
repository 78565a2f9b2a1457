//! Experiment configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sharpbound::functionals::{Numerics, DEFAULT_EPSILON};
use sharpbound::{discretize::MIN_POINTS, Family, Potential};

use crate::{CliError, Result};

/// A field that is either a number or the string `"auto"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutoOr<T> {
    Auto(Auto),
    Value(T),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Auto {
    Auto,
}

impl<T: Copy> AutoOr<T> {
    fn value(&self) -> Option<T> {
        match self {
            AutoOr::Auto(_) => None,
            AutoOr::Value(v) => Some(*v),
        }
    }
}

impl<T> Default for AutoOr<T> {
    fn default() -> Self {
        AutoOr::Auto(Auto::Auto)
    }
}

/// Catalog entry. `params` holds the family parameters by name; a
/// `scaled_harmonic` without `t_match` is matched to each row's `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default = "one")]
    pub dimension: usize,
    /// Factors of a `separable` potential.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<PotentialSpec>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSpec {
    #[serde(default)]
    pub n_points: AutoOr<usize>,
    #[serde(default)]
    pub radius: AutoOr<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub refine: bool,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

impl Default for NumericsSpec {
    fn default() -> Self {
        Self {
            n_points: AutoOr::default(),
            radius: AutoOr::default(),
            epsilon: DEFAULT_EPSILON,
            refine: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub csv_path: Option<PathBuf>,
    pub json_path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub potentials: Vec<PotentialSpec>,
    pub t_values: Vec<f64>,
    #[serde(default)]
    pub numerics: NumericsSpec,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: u64,
}

fn spec(family: &str, params: &[(&str, f64)]) -> PotentialSpec {
    PotentialSpec {
        family: family.into(),
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
            .collect(),
        dimension: 1,
        factors: Vec::new(),
    }
}

impl Default for ExperimentConfig {
    /// The reference sweep: six one-dimensional families on five temperatures.
    fn default() -> Self {
        Self {
            potentials: vec![
                spec("harmonic", &[("omega", 1.0)]),
                spec("quartic", &[("a", 1.0)]),
                spec("anharmonic_mix", &[("alpha", 1.0), ("beta", 1.0)]),
                spec("double_well", &[("a", 1.0), ("b", 2.0)]),
                spec("abs_power", &[("p", 1.0)]),
                spec("scaled_harmonic", &[("offset", 0.0)]),
            ],
            t_values: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            numerics: NumericsSpec {
                refine: true,
                ..NumericsSpec::default()
            },
            outputs: Outputs::default(),
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let config: Self =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.potentials.is_empty() {
            return Err(CliError::Config("no potentials".into()));
        }
        if self.t_values.is_empty() {
            return Err(CliError::Config("no t_values".into()));
        }
        if let Some(t) = self.t_values.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(CliError::Config(format!("t_values must be positive, got {t}")));
        }
        if let Some(n) = self.numerics.n_points.value() {
            if n < MIN_POINTS {
                return Err(CliError::Config(format!("n_points must be at least {MIN_POINTS}, got {n}")));
            }
        }
        if let Some(r) = self.numerics.radius.value() {
            if !(r.is_finite() && r > 0.0) {
                return Err(CliError::Config(format!("radius must be positive, got {r}")));
            }
        }
        let eps = self.numerics.epsilon;
        if !(eps > 0.0 && eps < 1.0) {
            return Err(CliError::Config(format!("epsilon must lie in (0, 1), got {eps}")));
        }
        // every spec must build at some temperature
        for p in &self.potentials {
            p.build(self.t_values[0])?;
        }
        Ok(())
    }

    pub fn numerics(&self) -> Numerics {
        Numerics {
            n_points: self.numerics.n_points.value(),
            radius: self.numerics.radius.value(),
            epsilon: self.numerics.epsilon,
            refine: self.numerics.refine,
            ..Numerics::default()
        }
    }
}

impl PotentialSpec {
    fn number(&self, key: &str) -> Result<Option<f64>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CliError::Config(format!("{}: {key} must be a number", self.family))),
        }
    }

    fn required(&self, key: &str) -> Result<f64> {
        self.number(key)?
            .ok_or_else(|| CliError::Config(format!("{}: missing parameter {key}", self.family)))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.params.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::Config(format!("{}: unknown parameter {k}", self.family))),
            None => Ok(()),
        }
    }

    fn center(&self) -> Result<Vec<f64>> {
        let d = self.dimension;
        match self.params.get("center") {
            None => Ok(vec![0.0; d]),
            Some(serde_json::Value::Number(n)) => {
                let mut c = vec![0.0; d];
                c[0] = n.as_f64().unwrap_or(0.0);
                Ok(c)
            }
            Some(serde_json::Value::Array(items)) => {
                let c: Option<Vec<f64>> = items.iter().map(|v| v.as_f64()).collect();
                let c = c.ok_or_else(|| CliError::Config("center entries must be numbers".into()))?;
                if c.len() != d {
                    return Err(CliError::Config(format!("center has {} entries, dimension is {d}", c.len())));
                }
                Ok(c)
            }
            Some(_) => Err(CliError::Config("center must be a number or an array".into())),
        }
    }

    /// Builds the potential for a row at temperature `t`.
    pub fn build(&self, t: f64) -> Result<Potential> {
        let d = self.dimension;
        let one_d = |family: Family| -> Result<Potential> {
            if d == 1 {
                Ok(Potential::new(family, 1, sharpbound::Symmetry::Even1D)?)
            } else {
                Ok(Potential::radial(family, d)?)
            }
        };
        let p = match self.family.as_str() {
            "harmonic" => {
                self.check_keys(&["omega"])?;
                one_d(Family::Harmonic {
                    omega: self.required("omega")?,
                })?
            }
            "abs_power" => {
                self.check_keys(&["p"])?;
                one_d(Family::AbsPower { p: self.required("p")? })?
            }
            "quartic" | "anharmonic_mix" | "double_well" if d != 1 => {
                return Err(CliError::Config(format!("{} is one-dimensional", self.family)))
            }
            "quartic" => {
                self.check_keys(&["a"])?;
                Potential::quartic(self.required("a")?)?
            }
            "anharmonic_mix" => {
                self.check_keys(&["alpha", "beta"])?;
                Potential::anharmonic_mix(self.required("alpha")?, self.required("beta")?)?
            }
            "double_well" => {
                self.check_keys(&["a", "b"])?;
                Potential::double_well(self.required("a")?, self.required("b")?)?
            }
            "scaled_harmonic" => {
                self.check_keys(&["t_match", "center", "offset"])?;
                let t_match = self.number("t_match")?.unwrap_or(t);
                let offset = self.number("offset")?.unwrap_or(0.0);
                Potential::scaled_harmonic(t_match, self.center()?, offset)?
            }
            "separable" => {
                self.check_keys(&[])?;
                if self.factors.len() != d {
                    return Err(CliError::Config(format!(
                        "separable: {} factors for dimension {d}",
                        self.factors.len()
                    )));
                }
                let factors = self.factors.iter().map(|f| f.build(t)).collect::<Result<Vec<_>>>()?;
                Potential::separable(factors)?
            }
            other => return Err(CliError::Config(format!("unknown family {other}"))),
        };
        Ok(p)
    }

    /// Stable `key=value` rendering of the parameters for reports.
    pub fn params_label(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.params {
            if !out.is_empty() {
                out.push(';');
            }
            let _ = write!(out, "{k}={v}");
        }
        if !self.factors.is_empty() {
            let inner: Vec<String> = self
                .factors
                .iter()
                .map(|f| format!("{}({})", f.family, f.params_label()))
                .collect();
            if !out.is_empty() {
                out.push(';');
            }
            let _ = write!(out, "factors=[{}]", inner.join(","));
        }
        out
    }
}

//! Seeded verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sharpbound::discretize::Grid;
use sharpbound::functionals::{self, Numerics};
use sharpbound::lsi_lab::{self, TrialFunction, TrialKind, CHAIN_TOL};
use sharpbound::quadrature::{self, DensityOnGrid};
use sharpbound::{oracle, Potential};

use crate::config::ExperimentConfig;
use crate::Result;

pub const RANDOM_PAIRS: usize = 1000;
pub const RANDOM_TRIALS: usize = 200;
const GIBBS_TRIALS: usize = 20;

/// Deliberate corruption used to check that failures are reported.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flip the sign of every deficit in the nonnegativity suite.
    DeficitSign,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest margin seen; negative means a failure.
    pub worst_margin: f64,
    /// First failing case, enough to replay it.
    pub failing_case: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteSummary>,
}

struct Tally {
    summary: SuiteSummary,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            summary: SuiteSummary {
                name,
                cases: 0,
                passed: 0,
                failed: 0,
                worst_margin: f64::INFINITY,
                failing_case: None,
            },
        }
    }

    /// Records one case; `margin ≥ 0` passes.
    fn case(&mut self, margin: f64, describe: impl FnOnce() -> Value) {
        let s = &mut self.summary;
        s.cases += 1;
        if margin.is_nan() || margin < s.worst_margin {
            s.worst_margin = margin;
        }
        if margin >= 0.0 {
            s.passed += 1;
        } else {
            s.failed += 1;
            if s.failing_case.is_none() {
                let mut case = describe();
                case["margin"] = json!(margin);
                s.failing_case = Some(case);
            }
        }
    }

    fn error(&mut self, message: String, describe: impl FnOnce() -> Value) {
        self.case(f64::NAN, || {
            let mut c = describe();
            c["error"] = json!(message);
            c
        });
    }

    fn finish(self) -> SuiteSummary {
        self.summary
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(2..=40);
    let p = (0..n)
        .map(|_| {
            if rng.gen_bool(0.1) {
                0.0
            } else {
                rng.gen::<f64>().powi(3)
            }
        })
        .collect::<Vec<f64>>();
    let mut p = p;
    if p.iter().all(|&x| x == 0.0) {
        p[0] = 1.0;
    }
    // a quarter of the pairs are close, where the inequalities are tight
    let q = if rng.gen_bool(0.25) {
        let scale = 10f64.powf(rng.gen_range(-6.0..-1.0));
        p.iter()
            .map(|&x| (x + 1e-3) * (1.0 + scale * rng.gen_range(-1.0..1.0)))
            .collect()
    } else {
        (0..n).map(|_| rng.gen::<f64>().powi(3) + 1e-12).collect()
    };
    (p, q)
}

fn information_suites(seed: u64) -> Vec<SuiteSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ckp = Tally::new("ckp");
    let mut relent = Tally::new("relative_entropy");
    let mut schwarz = Tally::new("schwarz_step");
    for i in 0..RANDOM_PAIRS {
        let (p, q) = random_pair(&mut rng);
        let grid = Grid::counting(p.len()).expect("at least two cells");
        let describe = || json!({ "index": i, "seed": seed, "rho": p, "rho0": q });
        let (Ok(rho), Ok(rho0)) = (DensityOnGrid::new(p.clone(), &grid), DensityOnGrid::new(q.clone(), &grid))
        else {
            ckp.error("density rejected".into(), describe);
            continue;
        };
        match functionals::ckp_gap(&rho, &rho0) {
            Ok(g) => ckp.case(g + 1e-10, describe),
            Err(e) => ckp.error(e.to_string(), describe),
        }
        match quadrature::relative_entropy(&rho, &rho0) {
            Ok(k) => relent.case(k + 1e-10, describe),
            Err(e) => relent.error(e.to_string(), describe),
        }
        match functionals::sqrt_l1_gap(&rho, &rho0) {
            Ok(g) => schwarz.case(g + 1e-10, describe),
            Err(e) => schwarz.error(e.to_string(), describe),
        }
    }
    vec![ckp.finish(), relent.finish(), schwarz.finish()]
}

fn mixture(grid: &Grid, rng: &mut ChaCha8Rng, spread: f64) -> Vec<f64> {
    let terms = rng.gen_range(1..=3);
    let params: Vec<(f64, f64, f64)> = (0..terms)
        .map(|_| {
            (
                rng.gen_range(-spread..spread),
                rng.gen_range(0.3..1.5) * spread.max(0.5),
                rng.gen_range(0.1..1.0),
            )
        })
        .collect();
    let mut psi: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|x| {
            params
                .iter()
                .map(|(c, s, w)| w * (-(x - c) * (x - c) / (2.0 * s * s)).exp())
                .sum()
        })
        .collect();
    let n = psi.len();
    psi[0] = 0.0;
    psi[n - 1] = 0.0;
    psi
}

fn normalize_l2(psi: &mut [f64], grid: &Grid) {
    let norm: f64 = psi.iter().zip(grid.weights()).map(|(p, w)| w * p * p).sum();
    psi.iter_mut().for_each(|p| *p /= norm.sqrt());
}

fn logsob_suite(seed: u64) -> SuiteSummary {
    let mut tally = Tally::new("log_sobolev");
    for lambda in [0.5, 1.0, 2.0] {
        let r = 9.0 * lambda;
        let grid = Grid::line(-r, r, 20001).expect("valid grid");
        let describe = || json!({ "extremal_lambda": lambda });
        let trial = match TrialFunction::new(TrialKind::GaussianExtremal { lambda, center: 0.0 }, &grid) {
            Ok(t) => t,
            Err(e) => {
                tally.error(e.to_string(), describe);
                continue;
            }
        };
        match functionals::logsob_deficit(&trial.samples, &grid, lambda) {
            Ok(d) => tally.case(1e-6 - d.abs(), describe),
            Err(e) => tally.error(e.to_string(), describe),
        }
        match functionals::logsob_stability_term(&trial.samples, &grid, lambda) {
            Ok(s) => tally.case(1e-8 - s.abs(), describe),
            Err(e) => tally.error(e.to_string(), describe),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4c53_4900);
    let grid = Grid::line(-14.0, 14.0, 4001).expect("valid grid");
    for i in 0..RANDOM_TRIALS {
        let lambda = rng.gen_range(0.5..2.0);
        let mut psi = mixture(&grid, &mut rng, 2.0);
        normalize_l2(&mut psi, &grid);
        let describe = || json!({ "index": i, "seed": seed, "lambda": lambda });
        match functionals::logsob_deficit(&psi, &grid, lambda) {
            Ok(d) => tally.case(d + 1e-8, describe),
            Err(e) => tally.error(e.to_string(), describe),
        }
    }
    tally.finish()
}

struct Cell {
    family: String,
    params: String,
    t: f64,
    potential: std::result::Result<Potential, String>,
}

impl Cell {
    fn describe(&self) -> Value {
        json!({ "family": self.family, "params": self.params, "t": self.t })
    }
}

fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    config
        .potentials
        .iter()
        .flat_map(|p| {
            config.t_values.iter().map(move |&t| Cell {
                family: p.family.clone(),
                params: p.params_label(),
                t,
                potential: p.build(t).map_err(|e| e.to_string()),
            })
        })
        .collect()
}

/// Per-cell margins computed in parallel and tallied in config order.
fn cell_suite<F>(name: &'static str, cells: &[Cell], f: F) -> SuiteSummary
where
    F: Fn(&Potential, f64) -> std::result::Result<Vec<f64>, String> + Sync,
{
    let results: Vec<_> = cells
        .par_iter()
        .map(|c| match &c.potential {
            Ok(v) => f(v, c.t),
            Err(e) => Err(e.clone()),
        })
        .collect();
    let mut tally = Tally::new(name);
    for (cell, res) in cells.iter().zip(results) {
        match res {
            Ok(margins) => margins.into_iter().for_each(|m| tally.case(m, || cell.describe())),
            Err(e) => tally.error(e, || cell.describe()),
        }
    }
    tally.finish()
}

fn line_cells(cells: Vec<Cell>) -> Vec<Cell> {
    cells
        .into_iter()
        .filter(|c| {
            c.potential
                .as_ref()
                .map_or(true, |v| v.dimension() == 1)
        })
        .collect()
}

fn gibbs_suite(cells: &[Cell], numerics: &Numerics, seed: u64) -> SuiteSummary {
    cell_suite("gibbs_principle", cells, |v, t| {
        let grid = functionals::grid_for(v, t, numerics).map_err(|e| e.to_string())?;
        let (rho, ln_z) = quadrature::gibbs_weights(v, t, &grid).map_err(|e| e.to_string())?;
        let floor = -ln_z / t;
        let rho = DensityOnGrid::new(rho, &grid).map_err(|e| e.to_string())?;
        let at_gibbs = functionals::gibbs_functional(&rho, v, 1.0 / t).map_err(|e| e.to_string())?;
        let mut margins = vec![1e-6 - (at_gibbs - floor).abs()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ t.to_bits());
        let spread = grid.radius() / 3.0;
        for _ in 0..GIBBS_TRIALS {
            let trial = mixture(&grid, &mut rng, spread);
            let trial = DensityOnGrid::new(trial, &grid).map_err(|e| e.to_string())?;
            let f = functionals::gibbs_functional(&trial, v, 1.0 / t).map_err(|e| e.to_string())?;
            margins.push(f - floor + 1e-8);
        }
        Ok(margins)
    })
}

fn deficit_suite(cells: &[Cell], numerics: &Numerics, fault: Fault) -> SuiteSummary {
    let numerics = numerics.clone().refined();
    cell_suite("deficit_nonnegative", cells, |v, t| {
        let r = functionals::keller_deficit(v, t, &numerics).map_err(|e| e.to_string())?;
        let d = if fault == Fault::DeficitSign { -r.deficit } else { r.deficit };
        Ok(vec![d + 1e-7])
    })
}

/// Margins of the translation/shift invariance and rescaling covariance
/// checks for one potential.
pub fn symmetry_margins(v: &Potential, t: f64, numerics: &Numerics) -> sharpbound::Result<Vec<f64>> {
    let base = functionals::keller_deficit(v, t, numerics)?.deficit;
    let mut margins = Vec::new();
    if v.dimension() == 1 {
        let moved = v.translate_and_shift(&[0.7], 3.0)?;
        let d = functionals::keller_deficit(&moved, t, numerics)?.deficit;
        margins.push(1e-6 - (d - base).abs());
    }
    let shifted = v.translate_and_shift(&vec![0.0; v.dimension()], -2.5)?;
    let d = functionals::keller_deficit(&shifted, t, numerics)?.deficit;
    margins.push(1e-6 - (d - base).abs());
    for s in [0.5, 2.0] {
        let d = functionals::keller_deficit(&v.rescale(s)?, t / (s * s), numerics)?.deficit;
        let expected = s * s * base;
        margins.push(1e-4 * expected.abs() + 1e-9 - (d - expected).abs());
    }
    Ok(margins)
}

fn symmetry_suite(cells: &[Cell], numerics: &Numerics) -> SuiteSummary {
    cell_suite("symmetry", cells, |v, t| {
        if v.is_separable() {
            return Ok(Vec::new());
        }
        symmetry_margins(v, t, numerics).map_err(|e| e.to_string())
    })
}

fn golden_thompson_suite(cells: &[Cell], numerics: &Numerics) -> SuiteSummary {
    let summary = cell_suite("golden_thompson", cells, |v, t| {
        let gt = functionals::golden_thompson_check(v, t, numerics).map_err(|e| e.to_string())?;
        Ok(vec![gt.rhs * (1.0 + 1e-10) - gt.lhs_truncated])
    });
    let mut tally = Tally { summary };
    let describe = || json!({ "family": "harmonic", "params": "omega=1", "t": 1.0 });
    match Potential::harmonic(1.0).and_then(|v| functionals::golden_thompson_check(&v, 1.0, numerics)) {
        Ok(gt) => {
            let exact = oracle::harmonic_heat_trace(1.0, 1.0, 1);
            tally.case(1e-5 - (gt.lhs_truncated - exact).abs(), describe);
            tally.case(1e-8 - (gt.rhs - 0.5).abs(), describe);
        }
        Err(e) => tally.error(e.to_string(), describe),
    }
    tally.finish()
}

fn chain_suite(cells: &[Cell], numerics: &Numerics) -> SuiteSummary {
    cell_suite("proof_chain", cells, |v, t| {
        let c = lsi_lab::proof_chain_report(v, t, numerics).map_err(|e| e.to_string())?;
        Ok(vec![
            c.chain_margin + CHAIN_TOL,
            1e-6 - c.decomposition_residual.abs(),
            c.schwarz_worst_margin + 1e-10,
            c.triangle_margin + 1e-10,
        ])
    })
}

pub fn run_verify(config: &ExperimentConfig, fault: Fault) -> Result<VerifySummary> {
    let numerics = config.numerics();
    let seed = config.seed;
    let all = cells(config);
    let mut suites = information_suites(seed);
    suites.push(logsob_suite(seed));
    let line = line_cells(cells(config));
    suites.push(gibbs_suite(&line, &numerics, seed));
    suites.push(deficit_suite(&all, &numerics, fault));
    suites.push(symmetry_suite(&all, &numerics));
    suites.push(golden_thompson_suite(&all, &numerics));
    suites.push(chain_suite(&line, &numerics));
    let passed = suites.iter().all(|s| s.failed == 0);
    Ok(VerifySummary { seed, passed, suites })
}

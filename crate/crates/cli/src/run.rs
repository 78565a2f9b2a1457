//! `eval`, `sweep` and `chain`.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use sharpbound::functionals::{self, GoldenThompson, Numerics};
use sharpbound::lsi_lab::{self, ChainReport};
use sharpbound::DeficitReport;

use crate::config::{ExperimentConfig, PotentialSpec};
use crate::{CliError, Result};

pub const CSV_HEADER: [&str; 16] = [
    "family",
    "params",
    "d",
    "t",
    "e0",
    "ln_z",
    "deficit",
    "S",
    "b_opt",
    "ratio",
    "gt_lhs",
    "gt_rhs",
    "n_points",
    "radius",
    "err_estimate",
    "error",
];

#[derive(Clone, Debug, Serialize)]
pub struct EvalRecord {
    pub family: String,
    pub params: String,
    pub d: usize,
    pub report: DeficitReport,
    pub golden_thompson: GoldenThompson,
}

fn evaluate_one(spec: &PotentialSpec, t: f64, numerics: &Numerics) -> Result<EvalRecord> {
    let v = spec.build(t)?;
    let report = functionals::evaluate(&v, t, numerics)?;
    let golden_thompson = functionals::golden_thompson_check(&v, t, numerics)?;
    Ok(EvalRecord {
        family: spec.family.clone(),
        params: spec.params_label(),
        d: spec.dimension,
        report,
        golden_thompson,
    })
}

/// Evaluates a config holding exactly one potential and one temperature.
pub fn run_eval(config: &ExperimentConfig) -> Result<EvalRecord> {
    if config.potentials.len() != 1 || config.t_values.len() != 1 {
        return Err(CliError::Config(format!(
            "eval takes one potential and one t, got {} and {}",
            config.potentials.len(),
            config.t_values.len()
        )));
    }
    evaluate_one(&config.potentials[0], config.t_values[0], &config.numerics())
}

/// One sweep cell; failed cells keep their identity and carry the message.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub family: String,
    pub params: String,
    pub d: usize,
    pub t: f64,
    pub outcome: std::result::Result<EvalRecord, String>,
}

impl SweepRow {
    pub fn record(&self) -> Option<&EvalRecord> {
        self.outcome.as_ref().ok()
    }
}

/// All `(potential, t)` cells in config order, computed in parallel.
pub fn run_sweep(config: &ExperimentConfig) -> Vec<SweepRow> {
    let numerics = config.numerics();
    let cells: Vec<(&PotentialSpec, f64)> = config
        .potentials
        .iter()
        .flat_map(|p| config.t_values.iter().map(move |&t| (p, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(spec, t)| SweepRow {
            family: spec.family.clone(),
            params: spec.params_label(),
            d: spec.dimension,
            t,
            outcome: evaluate_one(spec, t, &numerics).map_err(|e| e.to_string()),
        })
        .collect()
}

/// 17 significant digits; missing values are `NaN`.
pub fn fmt_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_nan() => "NaN".into(),
        Some(v) => format!("{v:.16e}"),
        None => "NaN".into(),
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        let r = row.record();
        let rep = r.map(|r| &r.report);
        let gt = r.map(|r| &r.golden_thompson);
        let record = [
            row.family.clone(),
            row.params.clone(),
            row.d.to_string(),
            fmt_num(Some(row.t)),
            fmt_num(rep.map(|r| r.e0)),
            fmt_num(rep.map(|r| r.ln_z)),
            fmt_num(rep.map(|r| r.deficit)),
            fmt_num(rep.and_then(|r| r.stability_distance)),
            fmt_num(rep.and_then(|r| r.b_opt)),
            fmt_num(rep.and_then(|r| r.ratio)),
            fmt_num(gt.map(|g| g.lhs_truncated)),
            fmt_num(gt.map(|g| g.rhs)),
            rep.map_or_else(|| "NaN".into(), |r| r.numerics.n_points.to_string()),
            fmt_num(rep.map(|r| r.numerics.radius)),
            fmt_num(rep.and_then(|r| r.numerics.err_estimate)),
            row.outcome.as_ref().err().cloned().unwrap_or_default(),
        ];
        w.write_record(&record).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainRecord {
    pub family: String,
    pub params: String,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Chain reports for every one-dimensional `(potential, t)` cell.
pub fn run_chain(config: &ExperimentConfig) -> Vec<ChainRecord> {
    let numerics = config.numerics();
    let cells: Vec<(&PotentialSpec, f64)> = config
        .potentials
        .iter()
        .filter(|p| p.dimension == 1)
        .flat_map(|p| config.t_values.iter().map(move |&t| (p, t)))
        .collect();
    cells
        .par_iter()
        .map(|&(spec, t)| {
            let result = spec
                .build(t)
                .and_then(|v| Ok(lsi_lab::proof_chain_report(&v, t, &numerics)?));
            let (chain, error) = match result {
                Ok(c) => (Some(c), None),
                Err(e) => (None, Some(e.to_string())),
            };
            ChainRecord {
                family: spec.family.clone(),
                params: spec.params_label(),
                t,
                chain,
                error,
            }
        })
        .collect()
}

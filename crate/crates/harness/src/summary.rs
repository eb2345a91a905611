use std::collections::BTreeMap;
use std::io::{Read, Write};

use dpverify_core::posterior::quantile_sorted;
use serde::{Deserialize, Serialize};

use crate::run::{ReplicateRow, ROW_HEADER};
use crate::HarnessError;

/// Fraction of replicates whose full-sample estimate landed in the
/// analyst's interval.
pub fn compute_r_full(q_values: &[u8]) -> Result<f64, HarnessError> {
    if q_values.is_empty() {
        return Err(HarnessError::Summary(
            "r_full needs at least one Q value".into(),
        ));
    }
    Ok(q_values.iter().map(|&q| q as f64).sum::<f64>() / q_values.len() as f64)
}

/// Per-cell comparison of `r_full` with the distribution of posterior
/// medians across replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell_id: usize,
    #[serde(rename = "N")]
    pub population_size: usize,
    pub n_k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub interval_mode: String,
    pub synth_mode: String,
    pub estimand: String,
    pub reps: usize,
    pub r_full: f64,
    pub pm_min: f64,
    pub pm_q25: f64,
    pub pm_median: f64,
    pub pm_q75: f64,
    pub pm_max: f64,
    pub pm_mean: f64,
    /// Mean over reps of `|posterior_median - r_full|`.
    pub mean_abs_gap: f64,
    /// Fraction of reps with posterior median below 0.1.
    pub frac_pm_below_0_1: f64,
}

pub fn summarize(rows: &[ReplicateRow]) -> Result<Vec<CellSummary>, HarnessError> {
    let mut by_cell: BTreeMap<usize, Vec<&ReplicateRow>> = BTreeMap::new();
    for r in rows {
        by_cell.entry(r.cell_id).or_default().push(r);
    }
    by_cell
        .into_values()
        .map(|cell_rows| {
            let first = cell_rows[0];
            let q: Vec<u8> = cell_rows.iter().map(|r| r.trusted_q).collect();
            let r_full = compute_r_full(&q)?;
            let mut pm: Vec<f64> = cell_rows.iter().map(|r| r.posterior_median).collect();
            pm.sort_by(f64::total_cmp);
            let reps = pm.len();
            let mean = pm.iter().sum::<f64>() / reps as f64;
            let gap = pm.iter().map(|p| (p - r_full).abs()).sum::<f64>() / reps as f64;
            let below = pm.iter().filter(|&&p| p < 0.1).count() as f64 / reps as f64;
            Ok(CellSummary {
                cell_id: first.cell_id,
                population_size: first.population_size,
                n_k: first.n_k,
                m: first.m,
                alpha: first.alpha,
                epsilon: first.epsilon,
                interval_mode: first.interval_mode.as_str().to_string(),
                synth_mode: first.synth_mode.as_str().to_string(),
                estimand: first.estimand.as_str().to_string(),
                reps,
                r_full,
                pm_min: pm[0],
                pm_q25: quantile_sorted(&pm, 0.25),
                pm_median: quantile_sorted(&pm, 0.5),
                pm_q75: quantile_sorted(&pm, 0.75),
                pm_max: pm[reps - 1],
                pm_mean: mean,
                mean_abs_gap: gap,
                frac_pm_below_0_1: below,
            })
        })
        .collect()
}

/// Reads replicate rows, rejecting files that lack any expected column.
pub fn read_rows<R: Read>(input: R) -> Result<Vec<ReplicateRow>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let missing: Vec<&str> = ROW_HEADER
        .iter()
        .copied()
        .filter(|col| !headers.iter().any(|h| h == *col))
        .collect();
    if !missing.is_empty() {
        return Err(HarnessError::Summary(format!(
            "missing columns: {}",
            missing.join(",")
        )));
    }
    Ok(rdr
        .deserialize()
        .collect::<Result<Vec<ReplicateRow>, _>>()?)
}

pub fn write_summary<W: Write>(summary: &[CellSummary], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for s in summary {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

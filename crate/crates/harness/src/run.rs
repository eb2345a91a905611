//! Replicate generation.
//!
//! Seeds are derived from `base_seed` with [`derive_seed`]:
//!
//! * population: `derive_seed(base, [0])`
//! * confidential sample `D` for grid pair `(i_nk, i_M)`, rep `r`:
//!   `derive_seed(base, [1, i_nk, i_M, r])`
//! * synthetic `D0` for synthesizer `i_s`: `derive_seed(base, [2, i_s, i_nk, i_M, r])`
//! * verification for output cell `c`, rep `r`: `derive_seed(base, [3, c, r])`
//! * Gibbs chain for output cell `c`, rep `r`: `derive_seed(base, [4, c, r])`
//!
//! One `(D, D0)` pair per rep is shared by every estimand, interval mode and
//! alpha of its grid pair, so any single replicate can be regenerated
//! without running the rest of the study.

use std::io::Write;

use dpverify_core::posterior::gibbs_posterior;
use dpverify_core::rng::derive_seed;
use dpverify_core::survey::{
    draw_pps_sample, generate_population, horvitz_thompson_total, ratio_mean, srs_estimate,
    Population, SurveySample,
};
use dpverify_core::synthesis::{synthesize_biased, synthesize_srs, Provenance, SyntheticData};
use dpverify_core::verification::{
    build_interval, verify, verify_with_scheme, IntervalMode, PartitionScheme, ToleranceKind,
    ToleranceSpec,
};
use dpverify_core::EstimandKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// Output CSV header, in column order.
pub const ROW_HEADER: [&str; 17] = [
    "cell_id",
    "rep",
    "N",
    "n_k",
    "M",
    "alpha",
    "epsilon",
    "interval_mode",
    "synth_mode",
    "estimand",
    "trusted_tau_true",
    "trusted_tau_hat",
    "tau0_hat",
    "sd0",
    "trusted_Q",
    "s_noisy",
    "posterior_median",
];

/// One grid cell of the output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub id: usize,
    pub synth: Provenance,
    pub estimand: EstimandKind,
    pub n_k: usize,
    pub m: usize,
    pub mode: IntervalMode,
    pub alpha: f64,
}

/// Cells in output order: synthesizer, estimand, n_k, M, interval mode, alpha.
pub fn cells(config: &ExperimentConfig) -> Vec<Cell> {
    let mut out = Vec::new();
    for &synth in &config.synth_modes {
        for &estimand in &config.estimands {
            for &n_k in &config.nk_grid {
                for &m in &config.m_grid {
                    for &mode in &config.interval_modes {
                        for &alpha in &config.alpha_grid {
                            out.push(Cell {
                                id: out.len(),
                                synth,
                                estimand,
                                n_k,
                                m,
                                mode,
                                alpha,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// One replicate of one cell. Columns prefixed `trusted_` hold quantities
/// computed from confidential data that a real analyst never sees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRow {
    pub cell_id: usize,
    pub rep: usize,
    #[serde(rename = "N")]
    pub population_size: usize,
    pub n_k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub interval_mode: IntervalMode,
    pub synth_mode: Provenance,
    pub estimand: EstimandKind,
    pub trusted_tau_true: f64,
    pub trusted_tau_hat: f64,
    pub tau0_hat: f64,
    pub sd0: f64,
    #[serde(rename = "trusted_Q")]
    pub trusted_q: u8,
    pub s_noisy: f64,
    pub posterior_median: f64,
}

struct Truth {
    total: f64,
    mean: f64,
}

impl Truth {
    fn get(&self, kind: EstimandKind) -> f64 {
        match kind {
            EstimandKind::Total => self.total,
            EstimandKind::Mean => self.mean,
        }
    }
}

/// Runs every replicate of every cell. Rows come back ordered by
/// `(cell_id, rep)` whatever the scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ReplicateRow>, HarnessError> {
    config.validate()?;
    let base = config.base_seed;
    let pop = generate_population(
        config.population_size,
        derive_seed(base, &[0]),
        &config.population_model,
    )?;
    run_on_population(config, &pop)
}

/// [`run_experiment`] against an existing population.
pub fn run_on_population(
    config: &ExperimentConfig,
    pop: &Population,
) -> Result<Vec<ReplicateRow>, HarnessError> {
    config.validate()?;
    if pop.size() != config.population_size {
        return Err(HarnessError::Config(format!(
            "population has {} units but config says N = {}",
            pop.size(),
            config.population_size
        )));
    }
    let truth = Truth {
        total: pop.total(),
        mean: pop.mean(),
    };
    let all_cells = cells(config);

    let mut tasks = Vec::new();
    for (i_nk, _) in config.nk_grid.iter().enumerate() {
        for (i_m, _) in config.m_grid.iter().enumerate() {
            for rep in 0..config.reps {
                tasks.push((i_nk, i_m, rep));
            }
        }
    }

    let nested: Vec<Vec<ReplicateRow>> = tasks
        .par_iter()
        .map(|&(i_nk, i_m, rep)| replicate(config, pop, &truth, &all_cells, i_nk, i_m, rep))
        .collect::<Result<_, _>>()?;
    let mut rows: Vec<ReplicateRow> = nested.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.cell_id, r.rep));
    Ok(rows)
}

fn replicate(
    config: &ExperimentConfig,
    pop: &Population,
    truth: &Truth,
    all_cells: &[Cell],
    i_nk: usize,
    i_m: usize,
    rep: usize,
) -> Result<Vec<ReplicateRow>, HarnessError> {
    let base = config.base_seed;
    let n_k = config.nk_grid[i_nk];
    let m = config.m_grid[i_m];
    let n = n_k * m;
    let (i_nk64, i_m64, rep64) = (i_nk as u64, i_m as u64, rep as u64);

    let conf = draw_pps_sample(pop, n, derive_seed(base, &[1, i_nk64, i_m64, rep64]))?;
    let mut rows = Vec::new();
    for (i_s, &synth) in config.synth_modes.iter().enumerate() {
        let seed = derive_seed(base, &[2, i_s as u64, i_nk64, i_m64, rep64]);
        // n0 = n.
        let syn = synthesize(synth, pop, &conf, n, seed)?;
        for &estimand in &config.estimands {
            let tau_hat = full_sample_estimate(&conf, estimand)?;
            let e0 = srs_estimate(syn.x(), syn.population_size(), estimand)?;
            for cell in all_cells
                .iter()
                .filter(|c| c.synth == synth && c.estimand == estimand && c.n_k == n_k && c.m == m)
            {
                let fixed = ToleranceSpec::fixed(ToleranceKind::SdMultiple, cell.alpha);
                let q = build_interval(e0.estimate, e0.sd, &fixed, m)?.contains(tau_hat);
                let spec = ToleranceSpec {
                    mode: cell.mode,
                    ..fixed
                };
                let cell64 = cell.id as u64;
                let vseed = derive_seed(base, &[3, cell64, rep64]);
                let result = if m == 1 {
                    let whole = PartitionScheme::single(conf.len())?;
                    verify_with_scheme(
                        &conf,
                        &whole,
                        e0.estimate,
                        e0.sd,
                        estimand,
                        &spec,
                        config.epsilon,
                        vseed,
                    )?
                } else {
                    verify(
                        &conf,
                        e0.estimate,
                        e0.sd,
                        estimand,
                        &spec,
                        m,
                        config.epsilon,
                        vseed,
                    )?
                };
                let post = gibbs_posterior(
                    result.s_noisy,
                    m,
                    config.epsilon,
                    config.gibbs_iters,
                    config.gibbs_burnin,
                    derive_seed(base, &[4, cell64, rep64]),
                )?;
                rows.push(ReplicateRow {
                    cell_id: cell.id,
                    rep,
                    population_size: config.population_size,
                    n_k,
                    m,
                    alpha: cell.alpha,
                    epsilon: config.epsilon,
                    interval_mode: cell.mode,
                    synth_mode: synth,
                    estimand,
                    trusted_tau_true: truth.get(estimand),
                    trusted_tau_hat: tau_hat,
                    tau0_hat: e0.estimate,
                    sd0: e0.sd,
                    trusted_q: q as u8,
                    s_noisy: result.s_noisy,
                    posterior_median: post.summary.median,
                });
            }
        }
    }
    Ok(rows)
}

fn synthesize(
    synth: Provenance,
    pop: &Population,
    conf: &SurveySample,
    n0: usize,
    seed: u64,
) -> Result<SyntheticData, HarnessError> {
    Ok(match synth {
        Provenance::FaithfulSrs => synthesize_srs(pop, n0, seed)?,
        Provenance::BiasedNormal => synthesize_biased(conf, n0, seed)?,
    })
}

/// Full-sample estimate: Horvitz-Thompson for totals, ratio estimator for
/// means.
pub fn full_sample_estimate(conf: &SurveySample, kind: EstimandKind) -> Result<f64, HarnessError> {
    Ok(match kind {
        EstimandKind::Total => horvitz_thompson_total(conf)?,
        EstimandKind::Mean => ratio_mean(conf, 1.0)?,
    })
}

pub fn write_rows<W: Write>(rows: &[ReplicateRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(ROW_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

use std::path::Path;

use dpverify_core::posterior::{DEFAULT_BURNIN, DEFAULT_ITERS};
use dpverify_core::survey::PopulationModel;
use dpverify_core::synthesis::Provenance;
use dpverify_core::verification::IntervalMode;
use dpverify_core::EstimandKind;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// One simulation study: a grid of `(n_k, M, alpha)` settings crossed with
/// interval modes, synthesizers and estimands, each replicated `reps` times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "N")]
    pub population_size: usize,
    pub reps: usize,
    pub nk_grid: Vec<usize>,
    #[serde(rename = "M_grid")]
    pub m_grid: Vec<usize>,
    pub alpha_grid: Vec<f64>,
    pub epsilon: f64,
    pub interval_modes: Vec<IntervalMode>,
    pub synth_modes: Vec<Provenance>,
    pub estimands: Vec<EstimandKind>,
    pub base_seed: u64,
    #[serde(default = "default_iters")]
    pub gibbs_iters: usize,
    #[serde(default = "default_burnin")]
    pub gibbs_burnin: usize,
    #[serde(default)]
    pub population_model: PopulationModel,
}

fn default_iters() -> usize {
    DEFAULT_ITERS
}

fn default_burnin() -> usize {
    DEFAULT_BURNIN
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Desk,
    Paper,
}

impl ExperimentConfig {
    /// Desk-scale study: N = 200000, 50 reps, n_k in {100, 500}, M in {25, 50}.
    pub fn desk() -> Self {
        Self {
            population_size: 200_000,
            reps: 50,
            nk_grid: vec![100, 500],
            m_grid: vec![25, 50],
            alpha_grid: vec![1.0, 3.0, 5.0],
            epsilon: 1.0,
            interval_modes: vec![IntervalMode::Fixed, IntervalMode::Adjusted],
            synth_modes: vec![Provenance::FaithfulSrs, Provenance::BiasedNormal],
            estimands: vec![EstimandKind::Total, EstimandKind::Mean],
            base_seed: 20_230_501,
            gibbs_iters: DEFAULT_ITERS,
            gibbs_burnin: DEFAULT_BURNIN,
            population_model: PopulationModel::default(),
        }
    }

    /// The full study: N = 10^7, 200 reps, n_k in {500, 20000, 50000},
    /// M in {25, 50, 90}.
    pub fn full_scale() -> Self {
        Self {
            population_size: 10_000_000,
            reps: 200,
            nk_grid: vec![500, 20_000, 50_000],
            m_grid: vec![25, 50, 90],
            ..Self::desk()
        }
    }

    pub fn preset(p: Preset) -> Self {
        match p {
            Preset::Desk => Self::desk(),
            Preset::Paper => Self::full_scale(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let cfg: Self = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks grid feasibility. `M = 1` is accepted as a diagnostic setting
    /// that verifies against the whole sample.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.population_size < 2 {
            return bad(format!(
                "N must be at least 2, got {}",
                self.population_size
            ));
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.nk_grid.is_empty() || self.m_grid.is_empty() || self.alpha_grid.is_empty() {
            return bad("nk_grid, M_grid and alpha_grid must be nonempty".into());
        }
        if self.interval_modes.is_empty()
            || self.synth_modes.is_empty()
            || self.estimands.is_empty()
        {
            return bad("interval_modes, synth_modes and estimands must be nonempty".into());
        }
        if self.nk_grid.contains(&0) || self.m_grid.contains(&0) {
            return bad("grid values must be positive".into());
        }
        if self.alpha_grid.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
            return bad("alpha values must be positive".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if self.gibbs_iters <= self.gibbs_burnin {
            return bad("gibbs_iters must exceed gibbs_burnin".into());
        }
        for &nk in &self.nk_grid {
            for &m in &self.m_grid {
                let n = nk.saturating_mul(m);
                if n > self.population_size {
                    return bad(format!(
                        "n = n_k * M = {nk} * {m} exceeds N = {}",
                        self.population_size
                    ));
                }
                if n < 2 {
                    return bad(format!("n = n_k * M = {n} is too small for estimation"));
                }
            }
        }
        Ok(())
    }
}

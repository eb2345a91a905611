//! Bayesian post-processing of the noisy count into a posterior for `r`,
//! the probability that a partition estimate falls in the tolerance
//! interval.

mod gibbs;
mod oracle;

use serde::{Deserialize, Serialize};

pub use gibbs::{
    gibbs_posterior, sample_r_given_s, sample_s_given_r, CountConditional, DEFAULT_BURNIN,
    DEFAULT_ITERS,
};
pub use oracle::{oracle_posterior, OracleGrid, MIN_GRID};

/// Median and quantiles of the retained draws, plus the chain settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub median: f64,
    pub q05: f64,
    pub q25: f64,
    pub q75: f64,
    pub q95: f64,
    pub iters: usize,
    pub burnin: usize,
}

impl PosteriorSummary {
    pub fn from_draws(draws: &[f64], iters: usize, burnin: usize) -> Self {
        let mut sorted = draws.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            median: quantile_sorted(&sorted, 0.5),
            q05: quantile_sorted(&sorted, 0.05),
            q25: quantile_sorted(&sorted, 0.25),
            q75: quantile_sorted(&sorted, 0.75),
            q95: quantile_sorted(&sorted, 0.95),
            iters,
            burnin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorResult {
    pub draws: Vec<f64>,
    pub summary: PosteriorSummary,
}

/// Linear-interpolation quantile (R type 7) of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let h = (n - 1) as f64 * p.clamp(0.0, 1.0);
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        }
    }
}

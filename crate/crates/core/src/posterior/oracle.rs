//! Deterministic reference for the posterior of `r`, used to validate the
//! Gibbs sampler.
//!
//! Summing the count out of the model gives the marginal
//! `p(r | s) ∝ Σ_S exp(-ε|s - S|) C(M, S) r^S (1 - r)^(M - S)`, which is
//! evaluated on a uniform grid over `[0, 1]` and integrated with the
//! trapezoid rule.

use crate::error::{Error, Result};

pub const MIN_GRID: usize = 1000;

/// Normalized posterior density and CDF of `r` on a uniform grid.
#[derive(Debug, Clone)]
pub struct OracleGrid {
    points: Vec<f64>,
    density: Vec<f64>,
    cdf: Vec<f64>,
}

impl OracleGrid {
    pub fn new(s_noisy: f64, m: usize, epsilon: f64, grid_size: usize) -> Result<Self> {
        if grid_size < MIN_GRID {
            return Err(Error::InvalidParameter(format!(
                "grid size must be at least {MIN_GRID}, got {grid_size}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if m == 0 || !s_noisy.is_finite() {
            return Err(Error::InvalidParameter(
                "need M >= 1 and a finite noisy count".into(),
            ));
        }

        // log of exp(-ε|s - S|) * C(M, S)
        let mut log_coef = Vec::with_capacity(m + 1);
        let mut log_binom = 0.0f64;
        for s in 0..=m {
            if s > 0 {
                log_binom += ((m - s + 1) as f64).ln() - (s as f64).ln();
            }
            log_coef.push(-epsilon * (s_noisy - s as f64).abs() + log_binom);
        }

        let h = 1.0 / grid_size as f64;
        let points: Vec<f64> = (0..=grid_size).map(|j| j as f64 * h).collect();
        let log_density: Vec<f64> = points.iter().map(|&r| log_marginal(&log_coef, r)).collect();
        let peak = log_density
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut density: Vec<f64> = log_density.iter().map(|l| (l - peak).exp()).collect();

        let mut cdf = Vec::with_capacity(points.len());
        cdf.push(0.0);
        for j in 1..points.len() {
            let prev = cdf[j - 1];
            cdf.push(prev + 0.5 * h * (density[j - 1] + density[j]));
        }
        let total = *cdf.last().unwrap();
        for v in cdf.iter_mut() {
            *v /= total;
        }
        for d in density.iter_mut() {
            *d /= total;
        }
        Ok(Self {
            points,
            density,
            cdf,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    /// `p`-quantile by linear interpolation of the trapezoid CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        let idx = self.cdf.partition_point(|&c| c < p);
        if idx == 0 {
            return self.points[0];
        }
        if idx >= self.cdf.len() {
            return *self.points.last().unwrap();
        }
        let (c0, c1) = (self.cdf[idx - 1], self.cdf[idx]);
        let (r0, r1) = (self.points[idx - 1], self.points[idx]);
        if c1 == c0 {
            return r0;
        }
        r0 + (p - c0) / (c1 - c0) * (r1 - r0)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }
}

fn log_marginal(log_coef: &[f64], r: f64) -> f64 {
    let m = log_coef.len() - 1;
    let ln_r = r.ln();
    let ln_1mr = (1.0 - r).ln();
    let term = |s: usize| {
        let a = if s == 0 { 0.0 } else { s as f64 * ln_r };
        let b = if s == m { 0.0 } else { (m - s) as f64 * ln_1mr };
        log_coef[s] + a + b
    };
    let max = (0..=m).map(term).fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + (0..=m).map(|s| (term(s) - max).exp()).sum::<f64>().ln()
}

/// Posterior median of `r` from the grid oracle.
pub fn oracle_posterior(s_noisy: f64, m: usize, epsilon: f64, grid_size: usize) -> Result<f64> {
    Ok(OracleGrid::new(s_noisy, m, epsilon, grid_size)?.median())
}

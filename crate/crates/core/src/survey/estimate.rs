use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::sample::SurveySample;

/// Population quantity being estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimandKind {
    Total,
    Mean,
}

impl EstimandKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimandKind::Total => "total",
            EstimandKind::Mean => "mean",
        }
    }
}

impl std::fmt::Display for EstimandKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EstimandKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "total" => Ok(Self::Total),
            "mean" => Ok(Self::Mean),
            other => Err(Error::InvalidParameter(format!(
                "unknown estimand {other:?}"
            ))),
        }
    }
}

/// Neumaier-compensated sum.
pub fn stable_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Horvitz-Thompson total `sum(w_i * x_i)`.
pub fn horvitz_thompson_total(sample: &SurveySample) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    Ok(stable_sum(sample.records().iter().map(|r| r.w * r.x)))
}

/// Survey-weighted ratio estimator of the mean with weights inflated by
/// `inflation`. The inflation cancels; it is accepted so partition estimates
/// can be written the same way as their totals.
pub fn ratio_mean(sample: &SurveySample, inflation: f64) -> Result<f64> {
    weighted_ratio(sample.records().iter().map(|r| (r.w, r.x)), inflation)
}

pub(crate) fn weighted_ratio(
    pairs: impl Iterator<Item = (f64, f64)> + Clone,
    inflation: f64,
) -> Result<f64> {
    if !(inflation > 0.0 && inflation.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "inflation must be positive, got {inflation}"
        )));
    }
    let mut count = 0usize;
    let den = stable_sum(pairs.clone().map(|(w, _)| {
        count += 1;
        w * inflation
    }));
    if count == 0 {
        return Err(Error::EmptySample);
    }
    let num = stable_sum(pairs.map(|(w, x)| w * inflation * x));
    Ok(num / den)
}

/// Point estimate with its estimated standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SrsEstimate {
    pub estimate: f64,
    pub sd: f64,
}

/// Estimate and standard deviation from data treated as a simple random
/// sample of size `n0` from a population of `population_size`, with the
/// finite population correction `1 - n0 / N`.
pub fn srs_estimate(
    values: &[f64],
    population_size: usize,
    kind: EstimandKind,
) -> Result<SrsEstimate> {
    let n0 = values.len();
    if n0 < 2 {
        return Err(Error::TooFewObservations(n0));
    }
    if n0 > population_size {
        return Err(Error::SampleTooLarge {
            n: n0,
            population: population_size,
        });
    }
    let (mean, var) = mean_and_variance(values);
    let fpc = 1.0 - n0 as f64 / population_size as f64;
    let mean_var = fpc * var / n0 as f64;
    let big_n = population_size as f64;
    Ok(match kind {
        EstimandKind::Total => SrsEstimate {
            estimate: big_n * mean,
            sd: (big_n * big_n * mean_var).max(0.0).sqrt(),
        },
        EstimandKind::Mean => SrsEstimate {
            estimate: mean,
            sd: mean_var.max(0.0).sqrt(),
        },
    })
}

/// Mean and `n - 1` sample variance, two-pass.
pub fn mean_and_variance(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = stable_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss = stable_sum(values.iter().map(|v| (v - mean) * (v - mean)));
    (mean, ss / (n - 1.0))
}

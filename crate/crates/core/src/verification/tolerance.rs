use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the half-width of a tolerance interval is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceKind {
    /// `alpha` multiples of the synthetic-data standard deviation.
    SdMultiple,
    /// `alpha` as a fraction of the synthetic-data estimate.
    Proportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalMode {
    /// Partition intervals equal the full-sample interval.
    Fixed,
    /// Partition intervals widened by `gamma`.
    Adjusted,
}

impl IntervalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            IntervalMode::Fixed => "fixed",
            IntervalMode::Adjusted => "adjusted",
        }
    }
}

/// The analyst's notion of "close enough".
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    pub kind: ToleranceKind,
    pub alpha: f64,
    pub mode: IntervalMode,
    /// Widening factor for adjusted intervals; `None` means `sqrt(M)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
}

impl ToleranceSpec {
    pub fn fixed(kind: ToleranceKind, alpha: f64) -> Self {
        Self {
            kind,
            alpha,
            mode: IntervalMode::Fixed,
            gamma: None,
        }
    }

    /// Adjusted interval with the default `gamma = sqrt(M)`.
    pub fn adjusted(kind: ToleranceKind, alpha: f64) -> Self {
        Self {
            kind,
            alpha,
            mode: IntervalMode::Adjusted,
            gamma: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "tolerance alpha must be a finite nonnegative number, got {}",
                self.alpha
            )));
        }
        if let Some(g) = self.gamma {
            if !(g >= 1.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "tolerance gamma must be at least 1, got {g}"
                )));
            }
        }
        Ok(())
    }

    /// Widening factor applied for `m` partitions; 1 for fixed intervals.
    pub fn effective_gamma(&self, m: usize) -> f64 {
        match self.mode {
            IntervalMode::Fixed => 1.0,
            IntervalMode::Adjusted => self.gamma.unwrap_or_else(|| (m as f64).sqrt()),
        }
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn everything() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }
}

/// Tolerance interval around `estimate0` for `m` partitions.
pub fn build_interval(
    estimate0: f64,
    sd0: f64,
    spec: &ToleranceSpec,
    m: usize,
) -> Result<Interval> {
    spec.validate()?;
    if sd0.is_nan() || sd0 < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sd0 must be nonnegative, got {sd0}"
        )));
    }
    let scale = match spec.kind {
        ToleranceKind::SdMultiple => sd0,
        ToleranceKind::Proportional => estimate0.abs(),
    };
    let half = spec.effective_gamma(m) * spec.alpha * scale;
    Ok(Interval {
        lo: estimate0 - half,
        hi: estimate0 + half,
    })
}

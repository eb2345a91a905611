use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sampled record with its inclusion probability and base weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: usize,
    pub x: f64,
    pub pi: f64,
    pub w: f64,
}

impl SampleRecord {
    /// Record with weight `1 / pi`.
    pub fn new(id: usize, x: f64, pi: f64) -> Result<Self> {
        if !(pi > 0.0 && pi <= 1.0) {
            return Err(Error::InvalidRecord(format!(
                "record {id}: inclusion probability {pi} outside (0, 1]"
            )));
        }
        if !x.is_finite() {
            return Err(Error::InvalidRecord(format!("record {id}: non-finite x")));
        }
        Ok(Self {
            id,
            x,
            pi,
            w: 1.0 / pi,
        })
    }
}

/// Confidential survey sample drawn from a population of size `population_size`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveySample {
    records: Vec<SampleRecord>,
    population_size: usize,
}

/// Relative tolerance accepted between a supplied weight and `1 / pi`.
pub const WEIGHT_TOLERANCE: f64 = 1e-12;

impl SurveySample {
    /// Builds a sample from records whose weight is already `1 / pi`.
    ///
    /// Externally supplied weights may differ from `1 / pi` by at most
    /// [`WEIGHT_TOLERANCE`] relative error; they are then replaced by the
    /// exact reciprocal. Ids must be unique.
    pub fn new(records: Vec<SampleRecord>, population_size: usize) -> Result<Self> {
        if records.len() > population_size {
            return Err(Error::SampleTooLarge {
                n: records.len(),
                population: population_size,
            });
        }
        let mut seen = std::collections::HashSet::with_capacity(records.len());
        let mut out = Vec::with_capacity(records.len());
        for r in records {
            if !seen.insert(r.id) {
                return Err(Error::InvalidRecord(format!(
                    "duplicate record id {}",
                    r.id
                )));
            }
            let canonical = SampleRecord::new(r.id, r.x, r.pi)?;
            let err = (r.w * r.pi - 1.0).abs();
            if err.is_nan() || err > WEIGHT_TOLERANCE {
                return Err(Error::InvalidRecord(format!(
                    "record {}: weight {} is not 1/pi for pi = {}",
                    r.id, r.w, r.pi
                )));
            }
            out.push(canonical);
        }
        Ok(Self {
            records: out,
            population_size,
        })
    }

    pub fn records(&self) -> &[SampleRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn population_size(&self) -> usize {
        self.population_size
    }

    pub fn x(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.x)
    }

    /// Copy of the sample with record `index` replaced; used to build
    /// neighbouring datasets.
    pub fn with_record(&self, index: usize, record: SampleRecord) -> Result<Self> {
        let mut records = self.records.clone();
        records[index] = record;
        Self::new(records, self.population_size)
    }

    /// Same records with every weight multiplied by `factor`.
    ///
    /// The result no longer satisfies `w = 1 / pi`, so it is only exposed for
    /// checking scale invariance of ratio estimators.
    #[doc(hidden)]
    pub fn rescaled_weights(&self, factor: f64) -> Self {
        Self {
            records: self
                .records
                .iter()
                .map(|r| SampleRecord {
                    w: r.w * factor,
                    ..*r
                })
                .collect(),
            population_size: self.population_size,
        }
    }
}

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{substream, PARTITION_STREAM};
use crate::survey::{stable_sum, weighted_ratio, EstimandKind, SurveySample};

/// Assignment of every sample record to one of `M` disjoint partitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionScheme {
    assignment: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl PartitionScheme {
    /// Builds a scheme from an explicit record-to-partition assignment.
    pub fn from_assignment(assignment: Vec<usize>, m: usize) -> Result<Self> {
        let mut members = vec![Vec::new(); m];
        for (i, &k) in assignment.iter().enumerate() {
            if k >= m {
                return Err(Error::PartitionIndex { k, m });
            }
            members[k].push(i);
        }
        if members.iter().any(Vec::is_empty) {
            return Err(Error::InvalidParameter(
                "every partition needs at least one record".into(),
            ));
        }
        Ok(Self {
            assignment,
            members,
        })
    }

    /// One partition holding the whole sample.
    pub fn single(n: usize) -> Result<Self> {
        Self::from_assignment(vec![0; n], 1)
    }

    pub fn num_partitions(&self) -> usize {
        self.members.len()
    }

    pub fn sample_size(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Record indices in partition `k`, ascending.
    pub fn members(&self, k: usize) -> &[usize] {
        &self.members[k]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

/// Uniformly random balanced partition of `sample` into `m` parts.
///
/// A random permutation of the records is dealt round-robin, so when `m`
/// does not divide `n` the leftover `n mod m` records land in distinct
/// partitions and sizes differ by at most one.
///
/// The shuffle is driven by ChaCha stream 0 of `seed`, the same stream
/// `verify` uses for its partition step.
pub fn partition(sample: &SurveySample, m: usize, seed: u64) -> Result<PartitionScheme> {
    partition_with_rng(sample, m, &mut substream(seed, PARTITION_STREAM))
}

pub fn partition_with_rng<R: Rng + ?Sized>(
    sample: &SurveySample,
    m: usize,
    rng: &mut R,
) -> Result<PartitionScheme> {
    let n = sample.len();
    if m < 2 || m > n {
        return Err(Error::InvalidPartitionCount { m, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut assignment = vec![0usize; n];
    for (pos, &record) in order.iter().enumerate() {
        assignment[record] = pos % m;
    }
    PartitionScheme::from_assignment(assignment, m)
}

/// Estimate from partition `k` with weights inflated by `n / n_k`, where
/// `n_k` is that partition's actual size.
pub fn partition_estimate(
    sample: &SurveySample,
    scheme: &PartitionScheme,
    k: usize,
    kind: EstimandKind,
) -> Result<f64> {
    let m = scheme.num_partitions();
    if k >= m {
        return Err(Error::PartitionIndex { k, m });
    }
    if scheme.sample_size() != sample.len() {
        return Err(Error::InvalidParameter(format!(
            "partition scheme covers {} records but the sample has {}",
            scheme.sample_size(),
            sample.len()
        )));
    }
    let records = sample.records();
    let members = scheme.members(k);
    let inflation = sample.len() as f64 / members.len() as f64;
    match kind {
        EstimandKind::Total => Ok(stable_sum(members.iter().map(|&i| {
            let r = &records[i];
            r.w * inflation * r.x
        }))),
        EstimandKind::Mean => weighted_ratio(
            members.iter().map(|&i| (records[i].w, records[i].x)),
            inflation,
        ),
    }
}

/// All `M` partition estimates in partition order.
pub fn partition_estimates(
    sample: &SurveySample,
    scheme: &PartitionScheme,
    kind: EstimandKind,
) -> Result<Vec<f64>> {
    (0..scheme.num_partitions())
        .map(|k| partition_estimate(sample, scheme, k, kind))
        .collect()
}

//! Sub-sample-and-aggregate verification of a synthetic-data estimate.
//!
//! The confidential sample is split at random into `M` disjoint partitions.
//! Each partition produces its own survey-weighted estimate with weights
//! inflated by `n / n_k`, the analyst's tolerance interval is applied to
//! every partition estimate, and the number of hits is released with Laplace
//! noise of scale `1 / epsilon`.

mod mechanism;
mod partition;
mod tolerance;

use serde::{Deserialize, Serialize};

pub use mechanism::{
    count_within, laplace_from_uniform, privatize_count, privatize_count_with_rng,
};
pub use partition::{
    partition, partition_estimate, partition_estimates, partition_with_rng, PartitionScheme,
};
pub use tolerance::{build_interval, Interval, IntervalMode, ToleranceKind, ToleranceSpec};

use crate::error::Result;
use crate::rng::{substream, NOISE_STREAM, PARTITION_STREAM};
use crate::survey::{EstimandKind, SurveySample};

/// Released output of one verification. The un-noised count is never kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub s_noisy: f64,
    pub m: usize,
    pub epsilon: f64,
    pub interval: Interval,
}

/// Runs the full verification: partition, estimate, count, privatize.
///
/// Randomness comes from two ChaCha streams of `seed`: stream 0 shuffles the
/// records into partitions and stream 1 supplies the single uniform behind
/// the Laplace draw.
#[allow(clippy::too_many_arguments)]
pub fn verify(
    conf: &SurveySample,
    estimate0: f64,
    sd0: f64,
    kind: EstimandKind,
    spec: &ToleranceSpec,
    m: usize,
    epsilon: f64,
    seed: u64,
) -> Result<VerificationResult> {
    mechanism::check_epsilon(epsilon)?;
    spec.validate()?;
    let scheme = partition_with_rng(conf, m, &mut substream(seed, PARTITION_STREAM))?;
    verify_with_scheme(conf, &scheme, estimate0, sd0, kind, spec, epsilon, seed)
}

/// [`verify`] with a caller-supplied partition scheme. Only the noise stream
/// of `seed` is used.
///
/// Accepts single-partition schemes, which reduce the measure to a noisy
/// indicator of the full-sample estimate; that is a diagnostic, not a
/// configuration with useful privacy-utility behaviour.
#[allow(clippy::too_many_arguments)]
pub fn verify_with_scheme(
    conf: &SurveySample,
    scheme: &PartitionScheme,
    estimate0: f64,
    sd0: f64,
    kind: EstimandKind,
    spec: &ToleranceSpec,
    epsilon: f64,
    seed: u64,
) -> Result<VerificationResult> {
    mechanism::check_epsilon(epsilon)?;
    let m = scheme.num_partitions();
    let interval = build_interval(estimate0, sd0, spec, m)?;
    let estimates = partition_estimates(conf, scheme, kind)?;
    let s = count_within(&estimates, interval);
    let s_noisy = privatize_count_with_rng(s, epsilon, &mut substream(seed, NOISE_STREAM))?;
    Ok(VerificationResult {
        s_noisy,
        m,
        epsilon,
        interval,
    })
}

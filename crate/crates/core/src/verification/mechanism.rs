use rand::Rng;
use rand_distr::Open01;

use crate::error::{Error, Result};

use super::tolerance::Interval;

/// Number of estimates inside the closed interval.
pub fn count_within(estimates: &[f64], interval: Interval) -> usize {
    estimates.iter().filter(|&&e| interval.contains(e)).count()
}

/// Laplace(0, 1/epsilon) variate from one uniform `u` in `(0, 1)` by inverse
/// CDF: `-(1/epsilon) * sign(u - 1/2) * ln(1 - 2|u - 1/2|)`.
pub fn laplace_from_uniform(epsilon: f64, u: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "uniform draw must lie in (0, 1), got {u}"
        )));
    }
    let centered = u - 0.5;
    if centered == 0.0 {
        return Ok(0.0);
    }
    let scale = 1.0 / epsilon;
    Ok(-scale * centered.signum() * (-2.0 * centered.abs()).ln_1p())
}

/// Releases `s + eta` with `eta ~ Laplace(0, 1/epsilon)`, taking the
/// uniform draw explicitly. The count has sensitivity 1: changing one record
/// moves at most one partition estimate.
pub fn privatize_count(s: usize, epsilon: f64, u: f64) -> Result<f64> {
    Ok(s as f64 + laplace_from_uniform(epsilon, u)?)
}

/// [`privatize_count`] drawing its single uniform from `rng`.
pub fn privatize_count_with_rng<R: Rng + ?Sized>(
    s: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<f64> {
    let u: f64 = rng.sample(Open01);
    privatize_count(s, epsilon, u)
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

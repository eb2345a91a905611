use crate::error::{Error, Result};

use super::estimate::stable_sum;

/// First-order inclusion probabilities for a PPS design of size `n`.
///
/// Starts from `n * z_i / sum(z)`. Units whose value reaches 1 become
/// certainty units with probability 1; the remaining probabilities are
/// recomputed from the reduced sample size and the size total of the
/// non-certainty units. Repeats until no new certainty units appear, so the
/// result sums to `n` and every value lies in `(0, 1]`.
pub fn compute_inclusion_probabilities(z: &[f64], n: usize) -> Result<Vec<f64>> {
    let big_n = z.len();
    if n > big_n {
        return Err(Error::SampleTooLarge {
            n,
            population: big_n,
        });
    }
    if n == 0 {
        return Err(Error::EmptySampleSize);
    }
    if let Some((index, &value)) = z
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::NonPositiveSize { index, value });
    }

    let mut certain = vec![false; big_n];
    let mut pi = vec![0.0; big_n];
    let mut n_certain = 0usize;
    loop {
        let remaining_n = (n - n_certain) as f64;
        let remaining_z = stable_sum(z.iter().zip(&certain).filter(|(_, &c)| !c).map(|(&v, _)| v));
        let mut new_certain = 0usize;
        for i in 0..big_n {
            if certain[i] {
                continue;
            }
            let p = remaining_n * z[i] / remaining_z;
            if p >= 1.0 {
                certain[i] = true;
                pi[i] = 1.0;
                new_certain += 1;
            } else {
                pi[i] = p;
            }
        }
        if new_certain == 0 {
            break;
        }
        n_certain += new_certain;
        if n_certain == n {
            break;
        }
    }
    // Each pass makes at most `remaining_n` units certain, with equality only
    // when no other unit is left, so zeros here can only come from rounding.
    if pi.iter().any(|&p| p <= 0.0) {
        return Err(Error::InvalidParameter(
            "certainty recursion left a unit with zero inclusion probability".into(),
        ));
    }
    Ok(pi)
}

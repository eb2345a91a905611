use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

use super::{PosteriorResult, PosteriorSummary};

/// Largest double below 1.
const R_MAX: f64 = 1.0 - f64::EPSILON / 2.0;

fn clamp_open(r: f64) -> f64 {
    r.clamp(f64::MIN_POSITIVE, R_MAX)
}

fn check_count(s: usize, m: usize) -> Result<()> {
    if s > m {
        Err(Error::CountOutOfRange { s, m })
    } else {
        Ok(())
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// One draw of `r | S ~ Beta(S + 1, M - S + 1)`, kept strictly inside (0, 1).
pub fn sample_r_given_s<R: Rng + ?Sized>(s: usize, m: usize, rng: &mut R) -> Result<f64> {
    check_count(s, m)?;
    let beta = Beta::new((s + 1) as f64, (m - s + 1) as f64)
        .map_err(|e| Error::InvalidParameter(format!("beta parameters: {e}")))?;
    Ok(clamp_open(beta.sample(rng)))
}

/// Full conditional of the true count given `r` and the noisy count.
///
/// The unnormalized log weight of `S` is
/// `-epsilon |s_noisy - S| - ln Γ(S+1) - ln Γ(M-S+1) + S ln r + (M-S) ln(1-r)`.
/// The parts that do not depend on `r` are computed once.
#[derive(Debug, Clone)]
pub struct CountConditional {
    base: Vec<f64>,
    scratch: Vec<f64>,
}

impl CountConditional {
    pub fn new(s_noisy: f64, m: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if !s_noisy.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noisy count must be finite, got {s_noisy}"
            )));
        }
        let log_fact = log_factorials(m);
        let base = (0..=m)
            .map(|s| -epsilon * (s_noisy - s as f64).abs() - log_fact[s] - log_fact[m - s])
            .collect();
        Ok(Self {
            base,
            scratch: vec![0.0; m + 1],
        })
    }

    pub fn m(&self) -> usize {
        self.base.len() - 1
    }

    /// Normalized probabilities of `S = 0..=M` at `r`. Fills the internal
    /// buffer and returns it.
    pub fn probabilities(&mut self, r: f64) -> Result<&[f64]> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "r must lie in (0, 1), got {r}"
            )));
        }
        let m = self.m();
        let ln_r = r.ln();
        let ln_1mr = (-r).ln_1p();
        let mut max = f64::NEG_INFINITY;
        for s in 0..=m {
            let lw = self.base[s] + s as f64 * ln_r + (m - s) as f64 * ln_1mr;
            self.scratch[s] = lw;
            max = max.max(lw);
        }
        let mut total = 0.0;
        for w in self.scratch.iter_mut() {
            *w = (*w - max).exp();
            total += *w;
        }
        for w in self.scratch.iter_mut() {
            *w /= total;
        }
        Ok(&self.scratch)
    }

    /// Draws `S` at `r` by inverse CDF on one uniform.
    pub fn sample<R: Rng + ?Sized>(&mut self, r: f64, rng: &mut R) -> Result<usize> {
        let u: f64 = rng.random();
        let probs = self.probabilities(r)?;
        let mut acc = 0.0;
        for (s, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return Ok(s);
            }
        }
        // Rounding left the cumulative sum a hair under 1; take the last
        // state with positive mass.
        Ok(probs.iter().rposition(|&p| p > 0.0).unwrap_or(0))
    }
}

/// One draw of `S | r, s_noisy` on `{0, ..., M}`.
pub fn sample_s_given_r<R: Rng + ?Sized>(
    r: f64,
    s_noisy: f64,
    m: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<usize> {
    CountConditional::new(s_noisy, m, epsilon)?.sample(r, rng)
}

/// `ln k!` for `k = 0..=m`.
fn log_factorials(m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = 0.0f64;
    out.push(0.0);
    for k in 1..=m {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

pub const DEFAULT_ITERS: usize = 20_000;
pub const DEFAULT_BURNIN: usize = 2_000;

/// Gibbs sampler for `p(r | s_noisy)` under
/// `s_noisy | S ~ Laplace(S, 1/epsilon)`, `S | r ~ Binomial(M, r)`,
/// `r ~ Beta(1, 1)`.
///
/// The chain starts at `S = clamp(round(s_noisy), 0, M)` and each iteration
/// draws `r | S` and then `S | r`. The `r` draws of iterations
/// `burnin..iters` are retained.
pub fn gibbs_posterior(
    s_noisy: f64,
    m: usize,
    epsilon: f64,
    iters: usize,
    burnin: usize,
    seed: u64,
) -> Result<PosteriorResult> {
    if iters <= burnin {
        return Err(Error::InvalidParameter(format!(
            "iterations ({iters}) must exceed burn-in ({burnin})"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let mut conditional = CountConditional::new(s_noisy, m, epsilon)?;
    let betas = (0..=m)
        .map(|s| Beta::new((s + 1) as f64, (m - s + 1) as f64))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::InvalidParameter(format!("beta parameters: {e}")))?;
    let mut rng = rng_from_seed(seed);

    let mut s = s_noisy.round().clamp(0.0, m as f64) as usize;
    let mut draws = Vec::with_capacity(iters - burnin);
    for it in 0..iters {
        let r = clamp_open(betas[s].sample(&mut rng));
        s = conditional.sample(r, &mut rng)?;
        if it >= burnin {
            draws.push(r);
        }
    }
    let summary = PosteriorSummary::from_draws(&draws, iters, burnin);
    Ok(PosteriorResult { draws, summary })
}

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::rng::rng_from_seed;

use super::inclusion::compute_inclusion_probabilities;
use super::population::Population;
use super::sample::{SampleRecord, SurveySample};

/// Fixed-size PPS sample without replacement.
///
/// Uses randomized systematic selection: certainty units are taken outright,
/// the other units are put in random order and laid end to end on a line
/// with lengths equal to their inclusion probabilities, and the units
/// covering the points `u, u + 1, ..., u + n' - 1` are selected for a single
/// uniform start `u`. Every unit is selected with exactly its computed
/// probability and the sample size is always `n`. Records are returned in
/// id order.
pub fn draw_pps_sample(pop: &Population, n: usize, seed: u64) -> Result<SurveySample> {
    let z: Vec<f64> = pop.z().collect();
    let pi = compute_inclusion_probabilities(&z, n)?;
    let mut rng = rng_from_seed(seed);

    let mut selected: Vec<usize> = Vec::with_capacity(n);
    let mut frame: Vec<usize> = Vec::with_capacity(pop.size());
    for (i, &p) in pi.iter().enumerate() {
        if p >= 1.0 {
            selected.push(i);
        } else {
            frame.push(i);
        }
    }
    let draws = n - selected.len();
    if draws > 0 {
        frame.shuffle(&mut rng);
        selected.extend(systematic_select(&frame, &pi, draws, rng.random::<f64>()));
    }
    selected.sort_unstable();

    let units = pop.units();
    let records = selected
        .into_iter()
        .map(|i| SampleRecord::new(units[i].id, units[i].x, pi[i]))
        .collect::<Result<Vec<_>>>()?;
    SurveySample::new(records, pop.size())
}

/// Systematic selection of `draws` units from `frame` (in frame order) with
/// probabilities `pi`, all below 1, for start `start` in `[0, 1)`.
fn systematic_select(frame: &[usize], pi: &[f64], draws: usize, start: f64) -> Vec<usize> {
    // Rescale so the line has length exactly `draws`; the probabilities
    // already sum to `draws` up to rounding.
    let raw_total: f64 = super::estimate::stable_sum(frame.iter().map(|&i| pi[i]));
    let scale = draws as f64 / raw_total;

    let mut out = Vec::with_capacity(draws);
    let mut cumulative = 0.0;
    let mut next_point = start;
    let mut taken = 0usize;
    for (pos, &i) in frame.iter().enumerate() {
        cumulative += pi[i] * scale;
        let last = pos + 1 == frame.len();
        if taken < draws && (next_point < cumulative || last) {
            out.push(i);
            taken += 1;
            next_point += 1.0;
        }
    }
    debug_assert_eq!(out.len(), draws);
    out
}

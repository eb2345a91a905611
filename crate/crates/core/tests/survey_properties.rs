use dpverify_core::survey::{
    compute_inclusion_probabilities, draw_pps_sample, generate_population, horvitz_thompson_total,
    ratio_mean, stable_sum, Population, PopulationModel,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn inclusion_probabilities_sum_to_n(
        z in prop::collection::vec(1e-3f64..1e3, 2..200),
        frac in 0.0f64..1.0,
    ) {
        let n = 1 + ((z.len() - 1) as f64 * frac) as usize;
        let pi = compute_inclusion_probabilities(&z, n).unwrap();
        let total: f64 = stable_sum(pi.iter().copied());
        prop_assert!((total - n as f64).abs() <= 1e-9 * n as f64, "sum {} vs {}", total, n);
        prop_assert!(pi.iter().all(|&p| p > 0.0 && p <= 1.0));
    }

    #[test]
    fn pps_sample_weights_are_reciprocal(seed in any::<u64>(), n in 1usize..40) {
        let pop = generate_population(60, 3, &PopulationModel::default()).unwrap();
        let s = draw_pps_sample(&pop, n, seed).unwrap();
        prop_assert_eq!(s.len(), n);
        for r in s.records() {
            prop_assert_eq!(r.w, 1.0 / r.pi);
        }
    }

    #[test]
    fn ratio_mean_scale_invariant(seed in any::<u64>(), c in 1e-3f64..1e3) {
        let pop = generate_population(200, 5, &PopulationModel::default()).unwrap();
        let s = draw_pps_sample(&pop, 30, seed).unwrap();
        let base = ratio_mean(&s, 1.0).unwrap();
        let scaled = ratio_mean(&s.rescaled_weights(c), 1.0).unwrap();
        prop_assert!((base - scaled).abs() <= 1e-9 * base.abs().max(1.0));
    }
}

#[test]
fn census_recovers_population_quantities() {
    let pop = generate_population(500, 21, &PopulationModel::default()).unwrap();
    let s = draw_pps_sample(&pop, 500, 1).unwrap();
    let tau = pop.total();
    assert!((horvitz_thompson_total(&s).unwrap() - tau).abs() <= 1e-9 * tau.abs());
    assert!((ratio_mean(&s, 1.0).unwrap() - pop.mean()).abs() <= 1e-9 * pop.mean().abs());
}

#[test]
fn pps_realized_inclusion_frequencies() {
    let pop = Population::from_pairs([(1.0, 1.0), (2.0, 2.0), (3.0, 3.0), (4.0, 4.0)]).unwrap();
    let reps = 100_000u64;
    let mut hits = [0u64; 4];
    for seed in 0..reps {
        for r in draw_pps_sample(&pop, 2, seed).unwrap().records() {
            hits[r.id] += 1;
        }
    }
    for (i, &p) in [0.2, 0.4, 0.6, 0.8].iter().enumerate() {
        let freq = hits[i] as f64 / reps as f64;
        let se = (p * (1.0 - p) / reps as f64).sqrt();
        assert!((freq - p).abs() < 3.0 * se, "unit {i}: {freq} vs {p}");
    }
}

#[test]
fn horvitz_thompson_unbiased_at_desk_scale() {
    let pop = generate_population(100_000, 2024, &PopulationModel::default()).unwrap();
    let tau = pop.total();
    let reps = 500;
    let estimates: Vec<f64> = (0..reps)
        .map(|seed| horvitz_thompson_total(&draw_pps_sample(&pop, 2000, seed).unwrap()).unwrap())
        .collect();
    let mean = estimates.iter().sum::<f64>() / reps as f64;
    let sd = (estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1) as f64).sqrt();
    assert!(
        (mean - tau).abs() <= 3.0 * sd / (reps as f64).sqrt(),
        "mean {mean} tau {tau} sd {sd}"
    );
    assert!((mean - tau).abs() / tau < 0.01);
}

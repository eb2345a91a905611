use dpverify_core::posterior::{
    gibbs_posterior, oracle_posterior, sample_r_given_s, DEFAULT_BURNIN, DEFAULT_ITERS,
};
use dpverify_core::rng::rng_from_seed;
use statrs::distribution::{Beta, ContinuousCDF};

fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn r_given_s_matches_beta_distribution() {
    let mut rng = rng_from_seed(10);
    let draws: Vec<f64> = (0..10_000)
        .map(|_| sample_r_given_s(3, 10, &mut rng).unwrap())
        .collect();
    let beta = Beta::new(4.0, 8.0).unwrap();
    let d = ks_statistic(draws, |x| beta.cdf(x));
    let critical = (-(0.001f64 / 2.0).ln() / 2.0).sqrt() / 100.0;
    assert!(d < critical, "D = {d}");
}

/// Median of the posterior written as a Beta mixture, by bisection on the
/// mixture CDF. Under the uniform prior every `C(M,S) r^S (1-r)^(M-S)`
/// integrates to `1/(M+1)`, so component `S` is `Beta(S+1, M-S+1)` with
/// weight proportional to the Laplace likelihood alone.
fn mixture_median(s_noisy: f64, m: usize, eps: f64) -> f64 {
    let weights: Vec<f64> = (0..=m)
        .map(|s| (-eps * (s_noisy - s as f64).abs()).exp())
        .collect();
    let total: f64 = weights.iter().sum();
    let comps: Vec<Beta> = (0..=m)
        .map(|s| Beta::new((s + 1) as f64, (m - s + 1) as f64).unwrap())
        .collect();
    let cdf = |r: f64| -> f64 {
        weights
            .iter()
            .zip(&comps)
            .map(|(w, b)| w * b.cdf(r))
            .sum::<f64>()
            / total
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn grid_oracle_agrees_with_beta_mixture() {
    for &(s, m, eps) in &[
        (1.0, 2, 1.0),
        (24.3, 25, 1.0),
        (3.0, 10, 0.5),
        (7.7, 10, 5.0),
    ] {
        let grid = oracle_posterior(s, m, eps, 4000).unwrap();
        let mix = mixture_median(s, m, eps);
        assert!(
            (grid - mix).abs() < 1e-5,
            "({s}, {m}, {eps}): {grid} vs {mix}"
        );
    }
}

#[test]
fn gibbs_matches_oracle_on_reference_point() {
    let g = gibbs_posterior(24.3, 25, 1.0, 20_000, 2_000, 1).unwrap();
    let o = oracle_posterior(24.3, 25, 1.0, 4000).unwrap();
    assert!(
        (g.summary.median - o).abs() < 0.01,
        "{} vs {o}",
        g.summary.median
    );
}

#[test]
fn oracle_median_monotone_in_noisy_count() {
    for m in [10usize, 25] {
        for eps in [0.5, 1.0, 5.0] {
            let mut prev = f64::NEG_INFINITY;
            let mut s = -3.0;
            while s <= m as f64 + 3.0 {
                let med = oracle_posterior(s, m, eps, 2000).unwrap();
                assert!(med >= prev - 1e-12, "M={m} eps={eps} s={s}");
                prev = med;
                s += 0.25;
            }
        }
    }
}

#[test]
fn posterior_symmetry() {
    for (m, c) in [(10usize, 2.5), (25, 7.0), (50, 44.0)] {
        let o1 = oracle_posterior(c, m, 1.0, 4000).unwrap();
        let o2 = oracle_posterior(m as f64 - c, m, 1.0, 4000).unwrap();
        assert!((o1 + o2 - 1.0).abs() < 1e-6);
        let g1 = gibbs_posterior(c, m, 1.0, DEFAULT_ITERS, DEFAULT_BURNIN, 3).unwrap();
        let g2 = gibbs_posterior(m as f64 - c, m, 1.0, DEFAULT_ITERS, DEFAULT_BURNIN, 4).unwrap();
        let sum = g1.summary.median + g2.summary.median;
        assert!((sum - 1.0).abs() < 0.01, "M={m} c={c}: {sum}");
    }
}

#![allow(dead_code)]

use dpverify_core::survey::{draw_pps_sample, generate_population, PopulationModel, SurveySample};
use dpverify_core::verification::ToleranceKind;
use dpverify_core::verification::ToleranceSpec;
use dpverify_core::EstimandKind;
use dpverify_server::{AnalysisQuery, GibbsSettings, ServerConfig};

pub fn sample(seed: u64) -> SurveySample {
    let pop = generate_population(20_000, seed, &PopulationModel::default()).unwrap();
    draw_pps_sample(&pop, 500, seed + 1).unwrap()
}

pub fn query(epsilon: f64) -> AnalysisQuery {
    AnalysisQuery {
        variable: "x".into(),
        estimand: EstimandKind::Total,
        estimate0: 200_000.0,
        sd0: 5_000.0,
        tolerance: ToleranceSpec::adjusted(ToleranceKind::SdMultiple, 3.0),
        m: 25,
        epsilon,
        gibbs: Some(GibbsSettings {
            iters: 2_000,
            burnin: 200,
        }),
        seed: None,
        include_draws: false,
    }
}

pub fn seeded_config() -> ServerConfig {
    ServerConfig {
        allow_client_seed: true,
        ..ServerConfig::default()
    }
}

//! Finite populations, PPS sampling and survey-weighted estimation.

mod estimate;
mod inclusion;
pub mod io;
mod population;
mod pps;
mod sample;

pub(crate) use estimate::weighted_ratio;
pub use estimate::{
    horvitz_thompson_total, mean_and_variance, ratio_mean, srs_estimate, stable_sum, EstimandKind,
    SrsEstimate,
};
pub use inclusion::compute_inclusion_probabilities;
pub use population::{
    generate_population, ConditionalModel, Population, PopulationModel, SizeModel, SpreadKind, Unit,
};
pub use pps::draw_pps_sample;
pub use sample::{SampleRecord, SurveySample, WEIGHT_TOLERANCE};

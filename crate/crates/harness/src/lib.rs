//! Repeated-sampling simulation study for the verification measure.
//!
//! Generates a population, draws PPS samples and synthetic data sets,
//! runs the private verification plus posterior for every grid cell and
//! replicate, and writes one CSV row per replicate. The harness sees
//! confidential intermediates (it computes the full-sample indicator `Q`);
//! such columns carry a `trusted_` prefix.

pub mod config;
pub mod run;
pub mod summary;

pub use config::{ExperimentConfig, Preset};
pub use run::{
    cells, run_experiment, run_on_population, write_rows, Cell, ReplicateRow, ROW_HEADER,
};
pub use summary::{compute_r_full, read_rows, summarize, write_summary, CellSummary};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("summary: {0}")]
    Summary(String),
    #[error(transparent)]
    Core(#[from] dpverify_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

//! Differentially private verification of survey-weighted estimates
//! computed from synthetic data.
//!
//! The crate covers the whole pipeline: simulated populations and PPS
//! samples ([`survey`]), the synthesizers used in the simulation study
//! ([`synthesis`]), the sub-sample-and-aggregate verification measure with
//! its Laplace mechanism ([`verification`]), and the Bayesian
//! post-processing of the noisy count ([`posterior`]).

pub mod error;
pub mod posterior;
pub mod rng;
pub mod survey;
pub mod synthesis;
pub mod verification;

pub use error::{Error, Result};
pub use survey::EstimandKind;

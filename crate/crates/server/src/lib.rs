//! Verification service: confidential samples are registered once with a
//! privacy budget, and analysts spend that budget on noisy verification
//! queries answered with a posterior summary.

pub mod config;
pub mod error;
pub mod http;
pub mod journal;
pub mod ledger;
pub mod service;

pub use config::ServerConfig;
pub use error::ServiceError;
pub use ledger::{BudgetLedger, LedgerEntry};
pub use service::{
    AnalysisQuery, BudgetStatus, DatasetRegistration, GibbsSettings, PosteriorReport,
    QueryResponse, RegistrationRequest, VerificationService,
};

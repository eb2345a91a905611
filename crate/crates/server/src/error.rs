use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown dataset {0}")]
    UnknownDataset(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("query needs epsilon {requested} but only {remaining} remains")]
    BudgetExceeded { requested: f64, remaining: f64 },
    #[error("{0}")]
    InvalidQuery(String),
    #[error("{0}")]
    InvalidDataset(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl ServiceError {
    /// Stable machine-readable code sent to clients.
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownDataset(_) => "UNKNOWN_DATASET",
            ServiceError::UnknownVariable(_) => "UNKNOWN_VARIABLE",
            ServiceError::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            ServiceError::InvalidQuery(_) => "INVALID_QUERY",
            ServiceError::InvalidDataset(_) => "INVALID_DATASET",
            ServiceError::Internal(_) => "INTERNAL",
        }
    }
}

impl From<std::io::Error> for ServiceError {
    fn from(e: std::io::Error) -> Self {
        ServiceError::Internal(e.to_string())
    }
}

use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

/// Relative slack allowed when a debit would land exactly on the total, so
/// that budgets like ten queries of 0.1 are not lost to rounding.
pub const BUDGET_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub query_id: String,
    pub epsilon: f64,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: u64,
}

/// Privacy spend of one dataset under sequential composition.
///
/// Invariants: `spent` equals the in-order sum of the log, and never exceeds
/// `total` by more than the rounding slack.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetLedger {
    total: f64,
    spent: f64,
    log: Vec<LedgerEntry>,
}

impl BudgetLedger {
    pub fn new(total: f64) -> Result<Self, ServiceError> {
        if !(total > 0.0 && total.is_finite()) {
            return Err(ServiceError::InvalidDataset(format!(
                "total_epsilon must be a positive finite number, got {total}"
            )));
        }
        Ok(Self {
            total,
            spent: 0.0,
            log: Vec::new(),
        })
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }

    pub fn remaining(&self) -> f64 {
        (self.total - self.spent).max(0.0)
    }

    pub fn log(&self) -> &[LedgerEntry] {
        &self.log
    }

    /// Fails with `BudgetExceeded` if `epsilon` does not fit.
    pub fn check(&self, epsilon: f64) -> Result<(), ServiceError> {
        if self.spent + epsilon <= self.total * (1.0 + BUDGET_SLACK) {
            Ok(())
        } else {
            Err(ServiceError::BudgetExceeded {
                requested: epsilon,
                remaining: self.remaining(),
            })
        }
    }

    /// Records a debit. Nothing changes when the check fails.
    pub fn debit(&mut self, entry: LedgerEntry) -> Result<(), ServiceError> {
        self.check(entry.epsilon)?;
        self.spent += entry.epsilon;
        self.log.push(entry);
        Ok(())
    }
}

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use dpverify_core::posterior::{gibbs_posterior, PosteriorSummary};
use dpverify_core::rng::derive_seed;
use dpverify_core::survey::{SampleRecord, SurveySample};
use dpverify_core::verification::{verify, ToleranceSpec};
use dpverify_core::EstimandKind;
use serde::{Deserialize, Serialize};
use uuid::Uuid;

use crate::config::ServerConfig;
use crate::error::ServiceError;
use crate::journal::{Journal, JournalEvent};
use crate::ledger::{BudgetLedger, LedgerEntry};

/// The only analysis variable a registered sample carries.
pub const VARIABLE: &str = "x";

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

/// Wire form of a registration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistrationRequest {
    pub records: Vec<SampleRecord>,
    pub n: usize,
    #[serde(rename = "N")]
    pub population_size: usize,
    pub total_epsilon: f64,
}

#[derive(Debug, Clone)]
pub struct DatasetRegistration {
    pub dataset_id: String,
    pub sample: SurveySample,
    pub total_epsilon: f64,
    pub created_at_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GibbsSettings {
    pub iters: usize,
    pub burnin: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisQuery {
    pub variable: String,
    pub estimand: EstimandKind,
    pub estimate0: f64,
    pub sd0: f64,
    pub tolerance: ToleranceSpec,
    #[serde(rename = "M", alias = "m")]
    pub m: usize,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gibbs: Option<GibbsSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Also return the retained posterior draws.
    #[serde(default)]
    pub include_draws: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorReport {
    #[serde(flatten)]
    pub summary: PosteriorSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<Vec<f64>>,
}

/// Everything released for one query. Only privatized quantities and their
/// post-processing appear here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryResponse {
    pub query_id: String,
    pub s_noisy: f64,
    pub posterior: PosteriorReport,
    /// Cumulative spend on the dataset, including this query.
    pub epsilon_spent: f64,
    pub epsilon_remaining: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetStatus {
    pub total: f64,
    pub spent: f64,
    pub remaining: f64,
    pub query_log: Vec<LedgerEntry>,
}

struct Dataset {
    registration: DatasetRegistration,
    ledger: Mutex<BudgetLedger>,
}

/// Registered datasets and their ledgers.
///
/// Each dataset's ledger mutex orders every debit on that dataset; the
/// journal is written while it is held, so the journal order matches the
/// ledger order. Verification runs after the lock is released.
pub struct VerificationService {
    config: ServerConfig,
    datasets: RwLock<HashMap<String, Arc<Dataset>>>,
    journal: Option<Mutex<Journal>>,
}

impl VerificationService {
    /// Builds the service, replaying the configured journal if any.
    pub fn new(config: ServerConfig) -> Result<Self, ServiceError> {
        let mut datasets = HashMap::new();
        let journal = match &config.journal_path {
            None => None,
            Some(path) => {
                let (journal, events) = Journal::open(path)?;
                for ev in events {
                    replay(&mut datasets, ev)?;
                }
                Some(Mutex::new(journal))
            }
        };
        Ok(Self {
            config,
            datasets: RwLock::new(datasets),
            journal,
        })
    }

    pub fn in_memory(config: ServerConfig) -> Self {
        Self {
            config: ServerConfig {
                journal_path: None,
                ..config
            },
            datasets: RwLock::new(HashMap::new()),
            journal: None,
        }
    }

    pub fn config(&self) -> &ServerConfig {
        &self.config
    }

    pub fn register_dataset(
        &self,
        sample: SurveySample,
        total_epsilon: f64,
    ) -> Result<String, ServiceError> {
        let ledger = BudgetLedger::new(total_epsilon)?;
        if sample.is_empty() {
            return Err(ServiceError::InvalidDataset("sample has no records".into()));
        }
        let registration = DatasetRegistration {
            dataset_id: Uuid::new_v4().simple().to_string(),
            sample,
            total_epsilon,
            created_at_ms: now_ms(),
        };
        self.append(|| JournalEvent::Register {
            dataset_id: registration.dataset_id.clone(),
            total_epsilon,
            created_at_ms: registration.created_at_ms,
            population_size: registration.sample.population_size(),
            records: registration.sample.records().to_vec(),
        })?;
        let id = registration.dataset_id.clone();
        self.datasets.write().expect("dataset map poisoned").insert(
            id.clone(),
            Arc::new(Dataset {
                registration,
                ledger: Mutex::new(ledger),
            }),
        );
        Ok(id)
    }

    /// Validates and registers a wire-format request.
    pub fn register_request(&self, req: RegistrationRequest) -> Result<String, ServiceError> {
        if req.n != req.records.len() {
            return Err(ServiceError::InvalidDataset(format!(
                "n = {} but {} records were sent",
                req.n,
                req.records.len()
            )));
        }
        let sample = SurveySample::new(req.records, req.population_size)
            .map_err(|e| ServiceError::InvalidDataset(e.to_string()))?;
        self.register_dataset(sample, req.total_epsilon)
    }

    pub fn registration(&self, dataset_id: &str) -> Result<DatasetRegistration, ServiceError> {
        Ok(self.dataset(dataset_id)?.registration.clone())
    }

    pub fn submit_query(
        &self,
        dataset_id: &str,
        query: &AnalysisQuery,
    ) -> Result<QueryResponse, ServiceError> {
        let ds = self.dataset(dataset_id)?;
        let gibbs = self.validate_query(&ds.registration, query)?;
        let seed = match query.seed {
            Some(s) => s,
            None => rand::random(),
        };
        let query_id = Uuid::new_v4().simple().to_string();

        let (spent, remaining) = {
            let mut ledger = ds.ledger.lock().expect("ledger poisoned");
            ledger.check(query.epsilon)?;
            let entry = LedgerEntry {
                query_id: query_id.clone(),
                epsilon: query.epsilon,
                timestamp_ms: now_ms(),
            };
            self.append(|| JournalEvent::Debit {
                dataset_id: dataset_id.to_string(),
                query_id: entry.query_id.clone(),
                epsilon: entry.epsilon,
                timestamp_ms: entry.timestamp_ms,
            })?;
            ledger.debit(entry)?;
            (ledger.spent(), ledger.remaining())
        };

        let internal = |e: dpverify_core::Error| ServiceError::Internal(e.to_string());
        let result = verify(
            &ds.registration.sample,
            query.estimate0,
            query.sd0,
            query.estimand,
            &query.tolerance,
            query.m,
            query.epsilon,
            seed,
        )
        .map_err(internal)?;
        let post = gibbs_posterior(
            result.s_noisy,
            query.m,
            query.epsilon,
            gibbs.iters,
            gibbs.burnin,
            derive_seed(seed, &[1]),
        )
        .map_err(internal)?;
        Ok(QueryResponse {
            query_id,
            s_noisy: result.s_noisy,
            posterior: PosteriorReport {
                summary: post.summary,
                draws: query.include_draws.then_some(post.draws),
            },
            epsilon_spent: spent,
            epsilon_remaining: remaining,
        })
    }

    pub fn budget_status(&self, dataset_id: &str) -> Result<BudgetStatus, ServiceError> {
        let ds = self.dataset(dataset_id)?;
        let ledger = ds.ledger.lock().expect("ledger poisoned");
        Ok(BudgetStatus {
            total: ledger.total(),
            spent: ledger.spent(),
            remaining: ledger.remaining(),
            query_log: ledger.log().to_vec(),
        })
    }

    fn dataset(&self, dataset_id: &str) -> Result<Arc<Dataset>, ServiceError> {
        self.datasets
            .read()
            .expect("dataset map poisoned")
            .get(dataset_id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownDataset(dataset_id.to_string()))
    }

    fn append(&self, event: impl FnOnce() -> JournalEvent) -> Result<(), ServiceError> {
        match &self.journal {
            Some(j) => j.lock().expect("journal poisoned").append(&event()),
            None => Ok(()),
        }
    }

    /// Every check that can be made before spending budget.
    fn validate_query(
        &self,
        reg: &DatasetRegistration,
        q: &AnalysisQuery,
    ) -> Result<GibbsSettings, ServiceError> {
        let invalid = |msg: String| Err(ServiceError::InvalidQuery(msg));
        if q.variable != VARIABLE {
            return Err(ServiceError::UnknownVariable(q.variable.clone()));
        }
        if !(q.epsilon > 0.0 && q.epsilon.is_finite()) {
            return invalid(format!(
                "epsilon must be positive and finite, got {}",
                q.epsilon
            ));
        }
        if q.m < 2 {
            return invalid(format!("M must be at least 2, got {}", q.m));
        }
        if q.m > self.config.max_m {
            return invalid(format!(
                "M = {} exceeds the server limit {}",
                q.m, self.config.max_m
            ));
        }
        if q.m > reg.sample.len() {
            return invalid(format!("M = {} exceeds the sample size", q.m));
        }
        if !q.estimate0.is_finite() {
            return invalid("estimate0 must be finite".into());
        }
        if !(q.sd0 >= 0.0 && q.sd0.is_finite()) {
            return invalid(format!("sd0 must be finite and nonnegative, got {}", q.sd0));
        }
        if let Err(e) = q.tolerance.validate() {
            return invalid(e.to_string());
        }
        let gibbs = q.gibbs.unwrap_or(GibbsSettings {
            iters: self.config.default_gibbs_iters,
            burnin: self.config.default_gibbs_burnin,
        });
        if gibbs.iters <= gibbs.burnin {
            return invalid("gibbs iters must exceed burnin".into());
        }
        if gibbs.iters > self.config.max_gibbs_iters {
            return invalid(format!(
                "gibbs iters {} exceeds the server limit {}",
                gibbs.iters, self.config.max_gibbs_iters
            ));
        }
        if q.seed.is_some() && !self.config.allow_client_seed {
            return invalid("this server does not accept client seeds".into());
        }
        Ok(gibbs)
    }
}

fn replay(
    datasets: &mut HashMap<String, Arc<Dataset>>,
    ev: JournalEvent,
) -> Result<(), ServiceError> {
    let corrupt = |msg: String| ServiceError::Internal(format!("journal replay: {msg}"));
    match ev {
        JournalEvent::Register {
            dataset_id,
            total_epsilon,
            created_at_ms,
            population_size,
            records,
        } => {
            let sample =
                SurveySample::new(records, population_size).map_err(|e| corrupt(e.to_string()))?;
            let ledger = BudgetLedger::new(total_epsilon)?;
            let ds = Dataset {
                registration: DatasetRegistration {
                    dataset_id: dataset_id.clone(),
                    sample,
                    total_epsilon,
                    created_at_ms,
                },
                ledger: Mutex::new(ledger),
            };
            if datasets.insert(dataset_id.clone(), Arc::new(ds)).is_some() {
                return Err(corrupt(format!("dataset {dataset_id} registered twice")));
            }
        }
        JournalEvent::Debit {
            dataset_id,
            query_id,
            epsilon,
            timestamp_ms,
        } => {
            let ds = datasets
                .get(&dataset_id)
                .ok_or_else(|| corrupt(format!("debit for unknown dataset {dataset_id}")))?;
            ds.ledger
                .lock()
                .expect("ledger poisoned")
                .debit(LedgerEntry {
                    query_id,
                    epsilon,
                    timestamp_ms,
                })
                .map_err(|e| corrupt(e.to_string()))?;
        }
    }
    Ok(())
}

//! JSON-over-HTTP routes.
//!
//! ```text
//! POST /datasets               -> 201 {dataset_id}
//! POST /datasets/{id}/verify   -> 200 QueryResponse | 402 | 404 | 422
//! GET  /datasets/{id}/budget   -> 200 BudgetStatus | 404
//! ```
//!
//! Every failure carries a body `{error_code, message}`.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;
use crate::service::{AnalysisQuery, RegistrationRequest, VerificationService};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error_code: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Registered {
    pub dataset_id: String,
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::UnknownDataset(_) => StatusCode::NOT_FOUND,
            ServiceError::BudgetExceeded { .. } => StatusCode::PAYMENT_REQUIRED,
            ServiceError::UnknownVariable(_)
            | ServiceError::InvalidQuery(_)
            | ServiceError::InvalidDataset(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let body = ErrorBody {
            error_code: self.code().to_string(),
            message: self.to_string(),
        };
        (self.status(), Json(body)).into_response()
    }
}

pub fn router(service: Arc<VerificationService>) -> Router {
    Router::new()
        .route("/datasets", post(register))
        .route("/datasets/{id}/verify", post(submit))
        .route("/datasets/{id}/budget", get(budget))
        .with_state(service)
}

fn parse<T: DeserializeOwned>(
    body: &[u8],
    bad: fn(String) -> ServiceError,
) -> Result<T, ServiceError> {
    serde_json::from_slice(body).map_err(|e| bad(format!("malformed body: {e}")))
}

async fn register(
    State(svc): State<Arc<VerificationService>>,
    body: Bytes,
) -> Result<(StatusCode, Json<Registered>), ServiceError> {
    let req: RegistrationRequest = parse(&body, ServiceError::InvalidDataset)?;
    let dataset_id = run_blocking(move || svc.register_request(req)).await?;
    Ok((StatusCode::CREATED, Json(Registered { dataset_id })))
}

async fn submit(
    State(svc): State<Arc<VerificationService>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ServiceError> {
    let query: AnalysisQuery = parse(&body, ServiceError::InvalidQuery)?;
    let resp = run_blocking(move || svc.submit_query(&id, &query)).await?;
    Ok(Json(resp).into_response())
}

async fn budget(
    State(svc): State<Arc<VerificationService>>,
    Path(id): Path<String>,
) -> Result<Response, ServiceError> {
    Ok(Json(svc.budget_status(&id)?).into_response())
}

async fn run_blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ServiceError> + Send + 'static,
) -> Result<T, ServiceError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ServiceError::Internal(e.to_string()))?
}

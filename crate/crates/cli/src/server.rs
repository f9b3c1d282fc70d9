//! Stateless JSON API: assessment, what-if and model introspection.

use std::collections::BTreeMap;
use std::future::Future;

use axum::body::Bytes;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

use splmat_core::assessment::{
    assess, default_config, validate, whatif, AssessmentConfig, RawQuestionnaire, WhatIfError,
};
use splmat_core::{Error, ValidationErrors, Violation, ViolationKind};

use crate::commands::model_payload;

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<Vec<Violation>>,
}

impl ApiError {
    fn new(code: &str, message: impl Into<String>) -> Self {
        ApiError {
            code: code.to_string(),
            message: message.into(),
            details: None,
        }
    }

    fn validation(errors: ValidationErrors) -> Self {
        ApiError {
            code: "invalid_answers".into(),
            message: errors.to_string(),
            details: Some(errors.0),
        }
    }

    fn status(&self) -> StatusCode {
        match self.code.as_str() {
            "not_found" => StatusCode::NOT_FOUND,
            "method_not_allowed" => StatusCode::METHOD_NOT_ALLOWED,
            "internal" => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(v) => ApiError::validation(v),
            Error::InvalidTree(_) => ApiError::new("invalid_config", e.to_string()),
            other => ApiError::new("internal", other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self)).into_response()
    }
}

#[derive(Debug, Deserialize)]
struct AssessRequest {
    answers: BTreeMap<String, Value>,
    #[serde(default)]
    config: Option<AssessmentConfig>,
}

#[derive(Debug, Deserialize)]
struct WhatIfRequest {
    base: BTreeMap<String, Value>,
    #[serde(default)]
    overrides: BTreeMap<String, Value>,
    #[serde(default)]
    config: Option<AssessmentConfig>,
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new("malformed_body", e.to_string()))
}

fn resolve_config(cfg: Option<AssessmentConfig>) -> Result<AssessmentConfig, ApiError> {
    let cfg = cfg.unwrap_or_else(default_config);
    cfg.validate()?;
    Ok(cfg)
}

async fn assess_handler(body: Bytes) -> Result<Response, ApiError> {
    let req: AssessRequest = parse_body(&body)?;
    let cfg = resolve_config(req.config)?;
    let q = validate(&RawQuestionnaire {
        id: None,
        answers: req.answers,
    })
    .map_err(ApiError::validation)?;
    Ok(Json(assess(&q, &cfg)?).into_response())
}

async fn whatif_handler(body: Bytes) -> Result<Response, ApiError> {
    let req: WhatIfRequest = parse_body(&body)?;
    let cfg = resolve_config(req.config)?;
    let base = validate(&RawQuestionnaire {
        id: None,
        answers: req.base,
    })
    .map_err(ApiError::validation)?;

    let mut overrides = BTreeMap::new();
    let mut bad = Vec::new();
    for (key, value) in req.overrides {
        match value.as_f64() {
            Some(v) => {
                overrides.insert(key, v);
            }
            None => bad.push(Violation {
                message: format!("{key}: expected a number, found {value}"),
                field: key,
                kind: ViolationKind::NotNumeric,
            }),
        }
    }
    if !bad.is_empty() {
        return Err(ApiError {
            code: "invalid_overrides".into(),
            ..ApiError::validation(ValidationErrors(bad))
        });
    }

    match whatif(&base, &overrides, &cfg) {
        Ok(w) => Ok(Json(w).into_response()),
        Err(WhatIfError::Overrides(v)) => Err(ApiError {
            code: "invalid_overrides".into(),
            ..ApiError::validation(v)
        }),
        Err(WhatIfError::Engine(e)) => Err(e.into()),
    }
}

async fn model_handler() -> Json<Value> {
    let mut payload = model_payload();
    payload["defaultTrees"] = serde_json::to_value(default_config()).expect("config serializes");
    Json(payload)
}

async fn health_handler() -> Json<Value> {
    Json(json!({"status": "ok"}))
}

async fn not_found() -> ApiError {
    ApiError::new("not_found", "no such endpoint")
}

async fn method_not_allowed() -> ApiError {
    ApiError::new("method_not_allowed", "method not allowed for this endpoint")
}

pub fn router() -> Router {
    Router::new()
        .route("/assess", post(assess_handler))
        .route("/whatif", post(whatif_handler))
        .route("/model", get(model_handler))
        .route("/health", get(health_handler))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(CorsLayer::permissive())
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router())
        .with_graceful_shutdown(shutdown)
        .await
}

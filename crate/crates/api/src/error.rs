use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use honorifics_core::store::{FilterError, StoreError};
use serde::Serialize;

/// Body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub field: Option<&'static str>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    BadParam { field: &'static str, message: String },
    UnknownCity(String),
    NoSnapshot,
    NotFound,
    Internal(String),
}

impl ApiError {
    pub fn bad(field: &'static str, message: impl Into<String>) -> Self {
        ApiError::BadParam { field, message: message.into() }
    }

    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::BadParam { .. } => StatusCode::BAD_REQUEST,
            ApiError::UnknownCity(_) | ApiError::NotFound => StatusCode::NOT_FOUND,
            ApiError::NoSnapshot => StatusCode::SERVICE_UNAVAILABLE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn body(&self) -> ErrorBody {
        let (code, field, message) = match self {
            ApiError::BadParam { field, message } => ("invalid_parameter", Some(*field), message.clone()),
            ApiError::UnknownCity(id) => ("unknown_city", Some("id"), format!("unknown city `{id}`")),
            ApiError::NoSnapshot => ("no_snapshot", None, "no dataset is loaded".into()),
            ApiError::NotFound => ("not_found", None, "no such resource".into()),
            ApiError::Internal(m) => ("internal", None, m.clone()),
        };
        ErrorBody { code, field, message }
    }
}

impl From<FilterError> for ApiError {
    fn from(e: FilterError) -> Self {
        let field = match e {
            FilterError::InvertedYearRange { .. } => "from",
            FilterError::InvalidTag(_) => "tags",
        };
        ApiError::bad(field, e.to_string())
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::UnknownCity(c) => ApiError::UnknownCity(c.to_string()),
            StoreError::InvalidFilter(f) => f.into(),
            other => ApiError::Internal(other.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(self.body())).into_response()
    }
}

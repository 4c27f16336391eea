use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no session {0}")]
    NotFound(String),

    /// Malformed JSON or unknown fields.
    #[error("{message}")]
    BadRequest { message: String, field: Option<String> },

    /// Well-formed but rejected by the game layer.
    #[error("{message}")]
    Invalid { message: String, field: Option<String> },

    #[error("{0}")]
    Conflict(String),

    #[error("session log: {0}")]
    Log(#[from] std::io::Error),
}

impl ServiceError {
    pub fn status(&self) -> StatusCode {
        match self {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::BadRequest { .. } => StatusCode::BAD_REQUEST,
            ServiceError::Invalid { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            ServiceError::Conflict(_) => StatusCode::CONFLICT,
            ServiceError::Log(_) => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "not_found",
            ServiceError::BadRequest { .. } => "bad_request",
            ServiceError::Invalid { .. } => "invalid",
            ServiceError::Conflict(_) => "conflict",
            ServiceError::Log(_) => "internal",
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            ServiceError::BadRequest { field, .. } | ServiceError::Invalid { field, .. } => field.as_deref(),
            _ => None,
        }
    }

    /// A JSON body error; serde names the offending field in backticks.
    pub(crate) fn from_json(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let field = message.split('`').nth(1).map(str::to_string);
        ServiceError::BadRequest { message, field }
    }

    /// A game-layer error raised while handling `field`.
    pub(crate) fn game(e: kostant::Error, field: &str) -> Self {
        use kostant::Error as E;
        let message = e.to_string();
        match e {
            E::IllegalMove { .. } => ServiceError::Conflict(message),
            // Spec errors lead with the field they are about, e.g. "active: ...".
            E::InvalidSpec(ref m) => {
                let field = m
                    .split_once(':')
                    .map(|(f, _)| f.trim())
                    .filter(|f| !f.is_empty() && f.chars().all(|c| c.is_ascii_lowercase() || "_, ".contains(c)))
                    .unwrap_or(field);
                ServiceError::Invalid { message, field: Some(field.to_string()) }
            }
            E::InvalidDiagram(_) | E::Classification { .. } | E::NotCrystallographic => {
                ServiceError::Invalid { message, field: Some("diagram".into()) }
            }
            _ => ServiceError::Invalid { message, field: Some(field.to_string()) },
        }
    }
}

impl IntoResponse for ServiceError {
    fn into_response(self) -> Response {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        if let Some(f) = self.field() {
            body["field"] = json!(f);
        }
        (self.status(), Json(json!({ "error": body }))).into_response()
    }
}

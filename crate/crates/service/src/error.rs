use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use graphdb_core::codecs::CodecError;
use graphdb_core::search::SearchError;
use graphdb_core::store::StoreError;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub code: &'static str,
    pub message: String,
    pub detail: Value,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError { status, body: ErrorBody { code, message: message.into(), detail: Value::Null } }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.body.detail = detail;
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "malformed", message)
    }

    pub fn unauthorized(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNAUTHORIZED, "unauthenticated", message)
    }

    pub fn forbidden(message: impl Into<String>) -> Self {
        Self::new(StatusCode::FORBIDDEN, "forbidden", message)
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", message)
    }

    pub fn unsupported_format(name: &str) -> Self {
        Self::new(StatusCode::UNSUPPORTED_MEDIA_TYPE, "unsupported_format", format!("unknown format {name:?}"))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

/// Offsets and record numbers of a parse error, for clients to point at.
fn codec_detail(e: &CodecError) -> Value {
    use serde_json::json;
    match e {
        CodecError::BadCharacter { offset, byte } => json!({"offset": offset, "byte": byte}),
        CodecError::PaddingNotZero { offset }
        | CodecError::TrailingData { offset }
        | CodecError::EmptyInput { offset }
        | CodecError::UnexpectedEndOfStream { offset } => json!({ "offset": offset }),
        CodecError::NeighborOutOfRange { offset, vertex, neighbor } => {
            json!({"offset": offset, "vertex": vertex, "neighbor": neighbor})
        }
        CodecError::TruncatedBitVector { expected, found } => json!({"expected": expected, "found": found}),
        CodecError::NotSymmetric(r, c) => json!({"row": r, "column": c}),
        CodecError::NonZeroDiagonal(r) | CodecError::RaggedRow(r) => json!({ "row": r }),
        CodecError::BadToken { row, column, .. } => json!({"row": row, "column": column}),
        CodecError::BadLabel { line } => json!({ "line": line }),
        CodecError::Record { index, source } => {
            let mut d = codec_detail(source);
            if let Value::Object(m) = &mut d {
                m.insert("record".into(), (*index).into());
            } else {
                d = json!({ "record": index });
            }
            d
        }
        _ => Value::Null,
    }
}

impl From<CodecError> for ApiError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::UnknownFormat(ref f) => ApiError::unsupported_format(f),
            e => ApiError::new(StatusCode::BAD_REQUEST, "parse_error", e.to_string()).with_detail(codec_detail(&e)),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::Parse(c) => c.into(),
            StoreError::ClassLine { line, ref source } => {
                let mut detail = codec_detail(source);
                if let Value::Object(m) = &mut detail {
                    m.insert("line".into(), line.into());
                } else {
                    detail = serde_json::json!({ "line": line });
                }
                ApiError::new(StatusCode::BAD_REQUEST, "parse_error", e.to_string()).with_detail(detail)
            }
            StoreError::Unauthenticated => ApiError::unauthorized(e.to_string()),
            StoreError::NotFound(_) => ApiError::not_found(e.to_string()),
            StoreError::InvalidAuthor(_)
            | StoreError::CoordinateCountMismatch { .. }
            | StoreError::NonFiniteCoordinate
            | StoreError::EmptyComment
            | StoreError::InvalidSlug(_)
            | StoreError::SchemaVersionMismatch { .. }
            | StoreError::Dump { .. } => ApiError::bad_request(e.to_string()),
            StoreError::Journal { .. } | StoreError::Scheduler(_) | StoreError::Io(_) => {
                tracing::error!(error = %e, "store failure");
                ApiError::internal(e.to_string())
            }
        }
    }
}

impl From<SearchError> for ApiError {
    fn from(e: SearchError) -> Self {
        match &e {
            SearchError::MalformedQuery { index, .. } | SearchError::UnknownInvariant { index, .. } => {
                ApiError::bad_request(e.to_string()).with_detail(serde_json::json!({ "predicate": index }))
            }
            SearchError::Codec(_) => ApiError::bad_request(e.to_string()),
            SearchError::Io(_) => ApiError::internal(e.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

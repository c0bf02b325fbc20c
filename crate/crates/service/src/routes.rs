use std::collections::BTreeMap;
use std::convert::Infallible;
use std::str::FromStr;

use axum::body::{Body, Bytes};
use axum::extract::{Path, Query, Request, State};
use axum::http::header::{CONTENT_TYPE, LOCATION};
use axum::http::{HeaderMap, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use base64::Engine;
use futures_util::stream;
use graphdb_core::codecs::{encode, write_record, EncodedGraph, Format};
use graphdb_core::invariants::{list_invariants, InvariantId};
use graphdb_core::layout::{export_svg, export_tikz, spring_embed, ExportOptions, LayoutParams};
use graphdb_core::scheduler::GraphId;
use graphdb_core::search::{self, WireQuery};
use graphdb_core::store::{UploadMeta, UploadOutcome};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::AppState;

type Result<T> = std::result::Result<T, ApiError>;

/// Records per chunk when streaming search exports.
const EXPORT_CHUNK: usize = 256;

pub fn routes(state: AppState) -> Router {
    Router::new()
        .route("/graphs", post(upload))
        .route("/graphs/{id}", get(detail))
        .route("/graphs/{id}/status", get(status))
        .route("/graphs/{id}/export", get(export_graph))
        .route("/graphs/{id}/comments", post(add_comment))
        .route("/graphs/{id}/embeddings", post(add_embedding))
        .route("/graphs/{id}/marks", post(add_mark))
        .route("/graphs/{id}/drawings/{file}", get(drawing))
        .route("/search", post(search_graphs))
        .route("/search/export", post(search_export))
        .route("/invariants", get(invariants))
        .route("/classes", get(classes))
        .route("/classes/{slug}", get(class_list).post(import_class))
        .route("/ViewGraphInfo.action", get(legacy))
        .fallback(|| async { ApiError::not_found("no such route") })
        .layer(middleware::from_fn_with_state(state.clone(), gate))
        .with_state(state)
}

/// Rejects unknown keys everywhere and applies the rate limit.
async fn gate(State(state): State<AppState>, req: Request, next: Next) -> Response {
    let caller = match state.keys.identify(req.headers()) {
        Ok(p) => p.map_or_else(|| "anonymous".to_string(), |p| p.name),
        Err(e) => return e.into_response(),
    };
    if let Some(limiter) = &state.limiter {
        if !limiter.allow(&caller) {
            return ApiError::new(StatusCode::TOO_MANY_REQUESTS, "rate_limited", "too many requests").into_response();
        }
    }
    next.run(req).await
}

fn graph_id(raw: &str) -> Result<GraphId> {
    raw.parse().map_err(|_| ApiError::bad_request(format!("graph id {raw:?} is not a number")))
}

fn location(id: GraphId) -> String {
    format!("/graphs/{id}")
}

fn format_param(name: Option<&str>) -> Result<Format> {
    match name {
        None => Ok(Format::Graph6),
        Some(n) => Format::from_str(n).map_err(|_| ApiError::unsupported_format(n)),
    }
}

fn parse_marks(names: &[String]) -> Result<Vec<InvariantId>> {
    names.iter().map(|n| InvariantId::lookup(n).ok_or_else(|| ApiError::bad_request(format!("unknown invariant {n:?}")))).collect()
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T> + Send + 'static) -> Result<T> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::internal(e.to_string()))?
}

fn json_body<T: for<'de> Deserialize<'de>>(body: &[u8]) -> Result<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("request body: {e}")))
}

fn is_json(headers: &HeaderMap) -> bool {
    headers.get(CONTENT_TYPE).and_then(|v| v.to_str().ok()).is_some_and(|v| v.starts_with("application/json"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct UploadBody {
    #[serde(default)]
    format: Option<String>,
    data: String,
    /// "base64" for binary formats carried in JSON.
    #[serde(default)]
    encoding: Option<String>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    comments: Vec<String>,
    #[serde(default)]
    marks: Vec<String>,
}

#[derive(Deserialize, Default)]
struct RawUploadParams {
    format: Option<String>,
    name: Option<String>,
}

/// JSON envelope, or the raw payload with `?format=` when the body is not
/// JSON.
async fn upload(
    State(state): State<AppState>,
    Query(params): Query<RawUploadParams>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response> {
    let who = state.keys.contributor(&headers)?;
    let (payload, meta) = if is_json(&headers) {
        let b: UploadBody = json_body(&body)?;
        let format = format_param(b.format.as_deref())?;
        let bytes = match b.encoding.as_deref() {
            None | Some("utf-8") => b.data.into_bytes(),
            Some("base64") => base64::engine::general_purpose::STANDARD
                .decode(b.data.trim())
                .map_err(|e| ApiError::bad_request(format!("base64: {e}")))?,
            Some(other) => return Err(ApiError::bad_request(format!("unknown encoding {other:?}"))),
        };
        let marks = parse_marks(&b.marks)?;
        (EncodedGraph::new(format, bytes), UploadMeta { name: b.name, comments: b.comments, marks })
    } else {
        let format = format_param(params.format.as_deref())?;
        (EncodedGraph::new(format, body.to_vec()), UploadMeta { name: params.name, ..UploadMeta::default() })
    };
    let store = state.store.clone();
    let outcome = blocking(move || Ok(store.upload(&payload, meta, Some(&who.name))?)).await?;
    let (code, duplicate) = match outcome {
        UploadOutcome::Created(_) => {
            state.wake_workers();
            (StatusCode::CREATED, false)
        }
        UploadOutcome::DuplicateOf(_) => (StatusCode::SEE_OTHER, true),
    };
    let id = outcome.id();
    let body = json!({"id": id, "location": location(id), "duplicate": duplicate});
    Ok((code, [(LOCATION, location(id))], Json(body)).into_response())
}

async fn detail(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response> {
    let id = graph_id(&id)?;
    Ok(Json(state.store.get_graph(id)?).into_response())
}

async fn status(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<Value>> {
    let id = graph_id(&id)?;
    let statuses = state.store.read(|st| st.graph(id).map(|_| st.mlfq().status(id)));
    let statuses = statuses.ok_or_else(|| ApiError::not_found(format!("graph {id} not found")))?;
    let done = statuses.values().all(|s| s.is_final());
    let map: BTreeMap<String, Value> = statuses
        .iter()
        .map(|(inv, s)| (inv.to_string(), json!({"status": s.as_str(), "value": s.value(), "display": s.label()})))
        .collect();
    Ok(Json(json!({"id": id, "quiescent": done, "invariants": map})))
}

#[derive(Deserialize, Default)]
struct FormatParam {
    format: Option<String>,
}

fn bytes_response(format: Format, bytes: Vec<u8>) -> Response {
    ([(CONTENT_TYPE, format.content_type())], bytes).into_response()
}

async fn export_graph(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(p): Query<FormatParam>,
) -> Result<Response> {
    let id = graph_id(&id)?;
    let format = format_param(p.format.as_deref())?;
    let g = state.store.graph(id).ok_or_else(|| ApiError::not_found(format!("graph {id} not found")))?;
    Ok(bytes_response(format, encode(format, &g)?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommentBody {
    text: String,
}

async fn add_comment(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response> {
    let who = state.keys.contributor(&headers)?;
    let id = graph_id(&id)?;
    let b: CommentBody = json_body(&body)?;
    state.store.add_comment(id, Some(&who.name), &b.text)?;
    let comment = state.store.read(|st| st.comments(id).last().cloned());
    Ok((StatusCode::CREATED, Json(json!({"id": id, "comment": comment}))).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingBody {
    /// Omitted: a spring embedding is generated.
    #[serde(default)]
    coords: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    iterations: Option<usize>,
}

async fn add_embedding(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response> {
    let who = state.keys.contributor(&headers)?;
    let id = graph_id(&id)?;
    let b: EmbeddingBody = if body.is_empty() { EmbeddingBody { coords: None, seed: None, iterations: None } } else { json_body(&body)? };
    let coords = match b.coords {
        Some(c) => c,
        None => {
            let g = state.store.graph(id).ok_or_else(|| ApiError::not_found(format!("graph {id} not found")))?;
            let mut params = LayoutParams::with_seed(b.seed.unwrap_or(0));
            if let Some(n) = b.iterations {
                params.iterations = n;
            }
            blocking(move || spring_embed(&g, &params).map_err(|e| ApiError::bad_request(e.to_string()))).await?
        }
    };
    let seq = state.store.add_embedding(id, Some(&who.name), coords)?;
    let base = format!("/graphs/{id}/drawings/{seq}");
    Ok((StatusCode::CREATED, Json(json!({"id": id, "seq": seq, "svg": format!("{base}.svg"), "tikz": format!("{base}.tikz")})))
        .into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkBody {
    invariant: String,
}

async fn add_mark(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response> {
    let who = state.keys.contributor(&headers)?;
    let id = graph_id(&id)?;
    let b: MarkBody = json_body(&body)?;
    let inv = parse_marks(std::slice::from_ref(&b.invariant))?[0];
    let created = state.store.add_mark(id, inv, Some(&who.name))?;
    let code = if created { StatusCode::CREATED } else { StatusCode::OK };
    Ok((code, Json(json!({"id": id, "invariant": inv, "created": created}))).into_response())
}

#[derive(Deserialize, Default)]
struct DrawingParams {
    #[serde(default)]
    labels: bool,
}

async fn drawing(
    State(state): State<AppState>,
    Path((id, file)): Path<(String, String)>,
    Query(p): Query<DrawingParams>,
) -> Result<Response> {
    let id = graph_id(&id)?;
    let (seq, ext) = file.rsplit_once('.').ok_or_else(|| ApiError::not_found(format!("no drawing {file:?}")))?;
    let seq: u32 = seq.parse().map_err(|_| ApiError::bad_request(format!("drawing number {seq:?} is not a number")))?;
    let found = state.store.read(|st| {
        let g = st.graph(id)?;
        let e = st.embeddings(id).iter().find(|e| e.seq == seq)?;
        Some((g.graph.clone(), e.coords.clone()))
    });
    let (g, coords) = found.ok_or_else(|| ApiError::not_found(format!("graph {id} has no drawing {seq}")))?;
    let opts = ExportOptions { labels: p.labels, graph_id: Some(id), seed: None };
    let (text, ctype) = match ext {
        "svg" => (export_svg(&g, &coords, &opts), "image/svg+xml"),
        "tikz" => (export_tikz(&g, &coords, &opts), "text/x-tex; charset=utf-8"),
        other => return Err(ApiError::unsupported_format(other)),
    };
    let text = text.map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(([(CONTENT_TYPE, ctype)], text).into_response())
}

fn parse_query(body: &[u8]) -> Result<search::Query> {
    let text = std::str::from_utf8(body).map_err(|_| ApiError::bad_request("query is not UTF-8"))?;
    Ok(text.parse::<WireQuery>()?.to_query()?)
}

async fn search_graphs(State(state): State<AppState>, body: Bytes) -> Result<Response> {
    let q = parse_query(&body)?;
    let store = state.store.clone();
    let page = blocking(move || Ok(store.read(|st| search::evaluate(st, &q))?)).await?;
    Ok(Json(page).into_response())
}

async fn search_export(State(state): State<AppState>, Query(p): Query<FormatParam>, body: Bytes) -> Result<Response> {
    let format = format_param(p.format.as_deref())?;
    let q = parse_query(&body)?;
    let store = state.store.clone();
    let ids = blocking(move || Ok(store.read(|st| search::matching_ids(st, &q))?)).await?;
    // stored graphs never change, so later chunks see the same records
    let store = state.store.clone();
    let chunks: Vec<Vec<GraphId>> = ids.chunks(EXPORT_CHUNK).map(<[GraphId]>::to_vec).collect();
    let body = stream::iter(chunks.into_iter().map(move |chunk| {
        let mut buf = Vec::new();
        store.read(|st| {
            for id in chunk {
                if let Some(g) = st.graph(id) {
                    write_record(format, &g.graph, &mut buf).expect("stored graphs fit every format");
                }
            }
        });
        Ok::<_, Infallible>(Bytes::from(buf))
    }));
    Ok(([(CONTENT_TYPE, format.content_type())], Body::from_stream(body)).into_response())
}

async fn invariants() -> Json<Value> {
    Json(json!(list_invariants()))
}

async fn classes(State(state): State<AppState>) -> Json<Value> {
    let list: Vec<Value> = state
        .store
        .classes()
        .iter()
        .map(|c| {
            let orders: BTreeMap<String, usize> = c.lists.iter().map(|(n, l)| (n.to_string(), l.len())).collect();
            json!({"slug": c.slug, "description": c.description, "count": c.count(), "orders": orders})
        })
        .collect();
    Json(Value::Array(list))
}

#[derive(Deserialize, Default)]
struct OrderParam {
    order: Option<usize>,
}

async fn class_list(State(state): State<AppState>, Path(slug): Path<String>, Query(p): Query<OrderParam>) -> Result<Response> {
    let lines = state.store.list_class(&slug, p.order)?;
    let mut text = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for l in lines {
        text.push_str(&l);
        text.push('\n');
    }
    Ok(bytes_response(Format::Graph6, text.into_bytes()))
}

#[derive(Deserialize, Default)]
struct ClassParams {
    description: Option<String>,
}

async fn import_class(
    State(state): State<AppState>,
    Path(slug): Path<String>,
    Query(p): Query<ClassParams>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response> {
    state.keys.contributor(&headers)?;
    let text = String::from_utf8(body.to_vec()).map_err(|_| ApiError::bad_request("class list is not UTF-8"))?;
    let store = state.store.clone();
    let slug2 = slug.clone();
    let n = blocking(move || Ok(store.import_class(&slug2, p.description.as_deref(), &text)?)).await?;
    Ok((StatusCode::CREATED, [(LOCATION, format!("/classes/{slug}"))], Json(json!({"slug": slug, "imported": n})))
        .into_response())
}

#[derive(Deserialize)]
struct LegacyParams {
    id: Option<String>,
}

async fn legacy(Query(p): Query<LegacyParams>) -> Result<Response> {
    let id = graph_id(p.id.as_deref().ok_or_else(|| ApiError::bad_request("missing id"))?)?;
    Ok((StatusCode::MOVED_PERMANENTLY, [(LOCATION, location(id))]).into_response())
}

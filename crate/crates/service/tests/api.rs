use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use graphdb_core::codecs::{encode, graph6_decode, Format};
use graphdb_core::scheduler::{JobQueue, QueueConfig};
use graphdb_core::store::Store;
use graphdb_service::{router, ApiKeyConfig, AppState, Config, KeyRing, Role};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

const PETERSEN: &str = "IheA@GUAo";

struct Api {
    app: Router,
    store: Arc<Store>,
}

fn config() -> Config {
    Config {
        api_keys: vec![
            ApiKeyConfig { key: "c-key".into(), name: "ann".into(), role: Role::Contributor },
            ApiKeyConfig { key: "r-key".into(), name: "rob".into(), role: Role::Reader },
        ],
        ..Config::default()
    }
}

fn api() -> Api {
    let cfg = config();
    let store = Arc::new(Store::in_memory(QueueConfig::default()));
    let state = AppState::new(store.clone(), KeyRing::new(&cfg.api_keys));
    Api { app: router(state, &cfg), store }
}

struct Reply {
    status: StatusCode,
    headers: axum::http::HeaderMap,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }

    fn text(&self) -> String {
        String::from_utf8(self.body.clone()).unwrap()
    }

    fn location(&self) -> &str {
        self.headers.get(header::LOCATION).unwrap().to_str().unwrap()
    }

    fn content_type(&self) -> &str {
        self.headers.get(header::CONTENT_TYPE).unwrap().to_str().unwrap()
    }
}

impl Api {
    async fn send(&self, method: Method, uri: &str, key: Option<&str>, ctype: Option<&str>, body: Vec<u8>) -> Reply {
        let mut req = Request::builder().method(method).uri(uri);
        if let Some(k) = key {
            req = req.header("x-api-key", k);
        }
        if let Some(c) = ctype {
            req = req.header(header::CONTENT_TYPE, c);
        }
        let resp = self.app.clone().oneshot(req.body(Body::from(body)).unwrap()).await.unwrap();
        let status = resp.status();
        let headers = resp.headers().clone();
        let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, headers, body }
    }

    async fn get(&self, uri: &str) -> Reply {
        self.send(Method::GET, uri, None, None, Vec::new()).await
    }

    async fn post_json(&self, uri: &str, key: Option<&str>, body: Value) -> Reply {
        self.send(Method::POST, uri, key, Some("application/json"), serde_json::to_vec(&body).unwrap()).await
    }

    async fn upload(&self, g6: &str) -> Reply {
        self.post_json("/graphs", Some("c-key"), json!({"format": "g6", "data": g6})).await
    }
}

#[tokio::test]
async fn duplicate_upload_redirects_to_the_original() {
    let api = api();
    let first = api.upload(PETERSEN).await;
    assert_eq!(first.status, StatusCode::CREATED);
    assert_eq!(first.location(), "/graphs/1");
    // the same graph relabeled, as a raw adjacency list body
    let g = graph6_decode(PETERSEN).unwrap();
    let perm: Vec<usize> = vec![9, 8, 7, 6, 5, 4, 3, 2, 1, 0];
    let h = graphdb_core::Graph::from_edges(10, g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap();
    let list = encode(Format::AdjacencyList, &h).unwrap();
    let second = api.send(Method::POST, "/graphs?format=adjlist", Some("c-key"), Some("text/plain"), list).await;
    assert_eq!(second.status, StatusCode::SEE_OTHER);
    assert_eq!(second.location(), "/graphs/1");
    assert_eq!(second.json()["duplicate"], true);
    assert_eq!(api.store.len(), 1);
}

#[tokio::test]
async fn mutations_need_a_contributor() {
    let api = api();
    let anon = api.post_json("/graphs", None, json!({"data": "Bw"})).await;
    assert_eq!(anon.status, StatusCode::UNAUTHORIZED);
    assert_eq!(anon.json()["code"], "unauthenticated");
    let reader = api.post_json("/graphs", Some("r-key"), json!({"data": "Bw"})).await;
    assert_eq!(reader.status, StatusCode::FORBIDDEN);
    let unknown = api.send(Method::GET, "/invariants", Some("nope"), None, Vec::new()).await;
    assert_eq!(unknown.status, StatusCode::UNAUTHORIZED);
    api.upload("Bw").await;
    for (uri, body) in [
        ("/graphs/1/comments", json!({"text": "hi"})),
        ("/graphs/1/embeddings", json!({})),
        ("/graphs/1/marks", json!({"invariant": "girth"})),
    ] {
        assert_eq!(api.post_json(uri, None, body.clone()).await.status, StatusCode::UNAUTHORIZED, "{uri}");
        assert_eq!(api.post_json(uri, Some("r-key"), body.clone()).await.status, StatusCode::FORBIDDEN, "{uri}");
        assert_eq!(api.post_json(uri, Some("c-key"), body).await.status, StatusCode::CREATED, "{uri}");
    }
    // reads work anonymously and for readers
    assert_eq!(api.get("/graphs/1").await.status, StatusCode::OK);
    assert_eq!(api.send(Method::GET, "/graphs/1", Some("r-key"), None, Vec::new()).await.status, StatusCode::OK);
}

#[tokio::test]
async fn detail_status_and_registry() {
    let api = api();
    api.post_json("/graphs", Some("c-key"), json!({"data": PETERSEN, "name": "Petersen graph", "comments": ["nice"], "marks": ["genus"]}))
        .await;
    let d = api.get("/graphs/1").await.json();
    assert_eq!(d["name"], "Petersen graph");
    assert_eq!(d["order"], 10);
    assert_eq!(d["invariants"].as_array().unwrap().len(), 44);
    assert_eq!(d["comments"][0]["text"], "nice");
    assert_eq!(d["comments"][0]["author"], "ann");
    let s = api.get("/graphs/1/status").await.json();
    assert_eq!(s["quiescent"], false);
    assert_eq!(s["invariants"]["girth"]["status"], "pending");
    // finish one job by hand
    let job = api.store.dispatch().unwrap();
    api.store.complete(job.job, graphdb_core::invariants::InvariantValue::Bool(false));
    let s = api.get("/graphs/1/status").await.json();
    assert_eq!(s["invariants"][job.invariant.slug()]["status"], "done");
    assert_eq!(s["invariants"][job.invariant.slug()]["value"], false);
    let reg = api.get("/invariants").await.json();
    assert_eq!(reg.as_array().unwrap().len(), 44);
    assert_eq!(api.get("/graphs/99").await.status, StatusCode::NOT_FOUND);
    assert_eq!(api.get("/graphs/abc").await.status, StatusCode::BAD_REQUEST);
    assert_eq!(api.get("/graphs/99/status").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn exports_match_the_codecs() {
    let api = api();
    api.upload(PETERSEN).await;
    let g = graph6_decode(PETERSEN).unwrap();
    for f in Format::ALL {
        let r = api.get(&format!("/graphs/1/export?format={}", f.as_str())).await;
        assert_eq!(r.status, StatusCode::OK);
        assert_eq!(r.body, encode(f, &g).unwrap(), "{f}");
        assert_eq!(r.content_type(), f.content_type());
    }
    let bad = api.get("/graphs/1/export?format=png").await;
    assert_eq!(bad.status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    assert_eq!(bad.json()["code"], "unsupported_format");
    api.upload("Bw").await;
    api.upload("C~").await;
    let all = api.post_json("/search/export?format=g6", None, json!({"predicates": []})).await;
    assert_eq!(all.text(), format!("{PETERSEN}\nBw\nC~\n"));
    let mc = api.post_json("/search/export?format=mc", None, json!({})).await;
    assert_eq!(mc.content_type(), "application/octet-stream");
    let mut want = encode(Format::Multicode, &g).unwrap();
    want.extend(encode(Format::Multicode, &graph6_decode("Bw").unwrap()).unwrap());
    want.extend(encode(Format::Multicode, &graph6_decode("C~").unwrap()).unwrap());
    assert_eq!(mc.body, want);
}

#[tokio::test]
async fn upload_errors_carry_offsets() {
    let api = api();
    let r = api.upload("B!").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let body = r.json();
    assert_eq!(body["code"], "parse_error");
    assert_eq!(body["detail"]["offset"], 1);
    let r = api.post_json("/graphs", Some("c-key"), json!({"format": "sparse6", "data": ":Fa@"})).await;
    assert_eq!(r.status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let r = api.post_json("/graphs", Some("c-key"), json!({"format": "mc", "encoding": "base64", "data": "AwIDAAMA"})).await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(api.store.read(|st| st.graph(1).unwrap().graph6.clone()), "Bw");
    let r = api.post_json("/graphs", Some("c-key"), json!({"data": "Bw", "marks": ["colourfulness"]})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn search_pages_and_errors() {
    let api = api();
    api.post_json("/graphs", Some("c-key"), json!({"data": PETERSEN, "name": "Petersen graph"})).await;
    api.post_json("/graphs", Some("c-key"), json!({"data": "Dhc", "comments": ["not petersen at all"]})).await;
    api.post_json("/graphs", Some("c-key"), json!({"data": "C~", "name": "K4"})).await;
    let r = api.post_json("/search", None, json!({"predicates": [{"type": "text_contains", "text": "PETERSEN"}], "columns": ["girth"]})).await;
    assert_eq!(r.status, StatusCode::OK);
    let page = r.json();
    assert_eq!(page["total"], 2);
    assert_eq!(page["rows"][0]["id"], 1);
    assert_eq!(page["rows"][0]["name"], "Petersen graph");
    assert_eq!(page["rows"][0]["columns"][0]["status"], "pending");
    let r = api.post_json("/search", None, json!({"sort": {"key": "id", "dir": "desc"}, "page": {"offset": 1, "limit": 1}})).await;
    let page = r.json();
    assert_eq!((page["total"].as_u64(), page["rows"][0]["id"].as_u64()), (Some(3), Some(2)));
    let iso = api.post_json("/search", None, json!({"predicates": [{"type": "isomorphic_to", "graph6": "Dhc"}]})).await.json();
    assert_eq!(iso["rows"][0]["id"], 2);
    let bad = api.post_json("/search", None, json!({"predicates": [{"type": "bool_is", "invariant": "girth", "value": true}]})).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    assert_eq!(bad.json()["detail"]["predicate"], 0);
    let bad = api.send(Method::POST, "/search", None, Some("application/json"), b"{not json".to_vec()).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    assert_eq!(bad.json()["code"], "malformed");
}

#[tokio::test]
async fn drawings_and_embeddings() {
    let api = api();
    api.upload("C~").await;
    let r = api.post_json("/graphs/1/embeddings", Some("c-key"), json!({"seed": 5})).await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(r.json()["seq"], 1);
    let r = api.post_json("/graphs/1/embeddings", Some("c-key"), json!({"coords": [[0.1, 0.1], [0.9, 0.1], [0.9, 0.9], [0.1, 0.9]]})).await;
    assert_eq!(r.json()["svg"], "/graphs/1/drawings/2.svg");
    let bad = api.post_json("/graphs/1/embeddings", Some("c-key"), json!({"coords": [[0.1, 0.1]]})).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    let svg = api.get("/graphs/1/drawings/2.svg").await;
    assert_eq!(svg.content_type(), "image/svg+xml");
    assert_eq!(svg.text().matches("<circle ").count(), 4);
    assert_eq!(svg.text().matches("<line ").count(), 6);
    let coords = api.store.read(|st| st.embeddings(1)[1].coords.clone());
    let g = graph6_decode("C~").unwrap();
    let opts = graphdb_core::layout::ExportOptions { labels: false, graph_id: Some(1), seed: None };
    let tikz = api.get("/graphs/1/drawings/2.tikz").await;
    assert_eq!(tikz.text(), graphdb_core::layout::export_tikz(&g, &coords, &opts).unwrap());
    assert_eq!(svg.text(), graphdb_core::layout::export_svg(&g, &coords, &opts).unwrap());
    assert_eq!(api.get("/graphs/1/drawings/3.svg").await.status, StatusCode::NOT_FOUND);
    assert_eq!(api.get("/graphs/1/drawings/1.png").await.status, StatusCode::UNSUPPORTED_MEDIA_TYPE);
    let labelled = api.get("/graphs/1/drawings/1.svg?labels=true").await.text();
    assert_eq!(labelled.matches("<text ").count(), 4);
}

#[tokio::test]
async fn marks_are_idempotent_per_author() {
    let api = api();
    api.upload("Bw").await;
    let first = api.post_json("/graphs/1/marks", Some("c-key"), json!({"invariant": "Chromatic Number"})).await;
    assert_eq!(first.status, StatusCode::CREATED);
    let again = api.post_json("/graphs/1/marks", Some("c-key"), json!({"invariant": "chromatic_number"})).await;
    assert_eq!(again.status, StatusCode::OK);
    assert_eq!(again.json()["created"], false);
    let hits = api.post_json("/search", None, json!({"predicates": [{"type": "marked_interesting", "invariant": "chromatic_number"}]})).await;
    assert_eq!(hits.json()["total"], 1);
}

#[tokio::test]
async fn classes_and_legacy_urls() {
    let api = api();
    let r = api.send(Method::POST, "/classes/cubic?description=cubic%20graphs", Some("c-key"), Some("text/plain"), b"C~\nE{Sw\n".to_vec()).await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(r.json()["imported"], 2);
    let list = api.get("/classes").await.json();
    assert_eq!(list[0]["slug"], "cubic");
    assert_eq!(list[0]["orders"]["6"], 1);
    assert_eq!(api.get("/classes/cubic?order=4").await.text(), "C~\n");
    assert_eq!(api.get("/classes/cubic").await.text(), "C~\nE{Sw\n");
    assert_eq!(api.get("/classes/none").await.status, StatusCode::NOT_FOUND);
    let bad = api.send(Method::POST, "/classes/x", Some("c-key"), Some("text/plain"), b"C~\nB!\n".to_vec()).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    assert_eq!(bad.json()["detail"]["line"], 2);
    let legacy = api.get("/ViewGraphInfo.action?id=26").await;
    assert_eq!(legacy.status, StatusCode::MOVED_PERMANENTLY);
    assert_eq!(legacy.location(), "/graphs/26");
    assert_eq!(api.get("/nowhere").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn rate_limit_applies_per_caller() {
    let cfg = Config { rate_limit: Some(3), ..config() };
    let store = Arc::new(Store::in_memory(QueueConfig::default()));
    let api = Api { app: router(AppState::new(store.clone(), KeyRing::new(&cfg.api_keys)), &cfg), store };
    for _ in 0..3 {
        assert_eq!(api.get("/invariants").await.status, StatusCode::OK);
    }
    assert_eq!(api.get("/invariants").await.status, StatusCode::TOO_MANY_REQUESTS);
    let keyed = api.send(Method::GET, "/invariants", Some("r-key"), None, Vec::new()).await;
    assert_eq!(keyed.status, StatusCode::OK);
}

#[tokio::test]
async fn built_service_computes_in_the_background() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Config { data_dir: Some(dir.path().to_path_buf()), workers: Some(2), durable: false, ..config() };
    let (state, app) = graphdb_service::build(&cfg).unwrap();
    let api = Api { app, store: state.store.clone() };
    api.upload("C~").await;
    let start = std::time::Instant::now();
    loop {
        let s = api.get("/graphs/1/status").await.json();
        if s["quiescent"] == true {
            assert_eq!(s["invariants"]["chromatic_number"]["value"], 4);
            assert_eq!(s["invariants"]["planar"]["display"], "true");
            break;
        }
        assert!(start.elapsed().as_secs() < 30, "never finished: {s}");
        tokio::time::sleep(std::time::Duration::from_millis(20)).await;
    }
}

//! Persistent graph store: graphs deduplicated by canonical form, invariant
//! records and their job queue, comments, marks, embeddings and class lists.
//!
//! State lives in memory behind one lock. A store opened on a data
//! directory appends every mutation to a JSON-lines journal and compacts it
//! into a snapshot (in the dump format) on open and on `checkpoint`.

mod dump;
mod journal;
mod time;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, Interrupted};
use crate::canonical::canonical_key;
use crate::codecs::{
    adjacency_list_print, adjacency_matrix_print, graph6_decode, graph6_encode, CodecError, EncodedGraph,
    GRAPH6_HEADER,
};
use crate::graph::Graph;
use crate::invariants::{self, InvariantId, InvariantValue};
use crate::scheduler::{
    Clock, Computer, Dispatched, GraphId, JobId, JobQueue, JobStatus, Mlfq, QueueConfig, SchedulerError, SystemClock,
};
use crate::search::SearchIndex;

pub use dump::DUMP_HEADER;
pub use time::Timestamp;

use journal::{Journal, Op};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("parse error: {0}")]
    Parse(#[from] CodecError),
    #[error("authentication required")]
    Unauthenticated,
    #[error("invalid author name {0:?}")]
    InvalidAuthor(String),
    #[error("{0} not found")]
    NotFound(String),
    #[error("expected {expected} coordinates, got {found}")]
    CoordinateCountMismatch { expected: usize, found: usize },
    #[error("coordinates must be finite numbers")]
    NonFiniteCoordinate,
    #[error("comment text is empty")]
    EmptyComment,
    #[error("invalid class slug {0:?}")]
    InvalidSlug(String),
    #[error("line {line}: {source}")]
    ClassLine { line: usize, source: CodecError },
    #[error("unsupported dump schema {found:?}")]
    SchemaVersionMismatch { found: String },
    #[error("dump line {line}: {message}")]
    Dump { line: usize, message: String },
    #[error("journal line {line}: {message}")]
    Journal { line: usize, message: String },
    #[error(transparent)]
    Scheduler(#[from] SchedulerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoredGraph {
    pub id: GraphId,
    /// Canonical graph6, unique across the store.
    pub canonical: String,
    pub graph6: String,
    pub name: Option<String>,
    pub uploader: String,
    pub uploaded_at: Timestamp,
    #[serde(skip)]
    pub graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comment {
    pub author: String,
    pub at: Timestamp,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    pub seq: u32,
    pub coords: Vec<[f64; 2]>,
    pub author: String,
    pub created_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InterestingMark {
    pub invariant: InvariantId,
    pub author: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GraphClass {
    pub slug: String,
    pub description: String,
    /// Verbatim graph6 lines keyed by graph order.
    pub lists: BTreeMap<usize, Vec<String>>,
}

impl GraphClass {
    pub fn count(&self) -> usize {
        self.lists.values().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UploadMeta {
    pub name: Option<String>,
    pub comments: Vec<String>,
    pub marks: Vec<InvariantId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UploadOutcome {
    Created(GraphId),
    DuplicateOf(GraphId),
}

impl UploadOutcome {
    pub fn id(self) -> GraphId {
        match self {
            UploadOutcome::Created(id) | UploadOutcome::DuplicateOf(id) => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantRow {
    pub invariant: InvariantId,
    pub name: &'static str,
    pub status: &'static str,
    pub value: Option<InvariantValue>,
    /// The value, or the status label when there is none.
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphDetail {
    pub id: GraphId,
    pub name: Option<String>,
    pub uploader: String,
    pub uploaded_at: Timestamp,
    pub order: usize,
    pub size: usize,
    pub graph6: String,
    pub canonical: String,
    pub adjacency_matrix: String,
    pub adjacency_list: String,
    pub invariants: Vec<InvariantRow>,
    pub comments: Vec<Comment>,
    pub embeddings: Vec<Embedding>,
    pub marks: Vec<InterestingMark>,
}

/// Everything the store holds. Readers get shared access through
/// [`Store::read`].
#[derive(Debug, Clone)]
pub struct StoreState {
    graphs: BTreeMap<GraphId, StoredGraph>,
    by_canonical: HashMap<String, GraphId>,
    comments: BTreeMap<GraphId, Vec<Comment>>,
    embeddings: BTreeMap<GraphId, Vec<Embedding>>,
    marks: BTreeMap<GraphId, BTreeSet<InterestingMark>>,
    classes: BTreeMap<String, GraphClass>,
    mlfq: Mlfq,
    index: SearchIndex,
}

impl StoreState {
    fn new(config: QueueConfig) -> Self {
        StoreState {
            graphs: BTreeMap::new(),
            by_canonical: HashMap::new(),
            comments: BTreeMap::new(),
            embeddings: BTreeMap::new(),
            marks: BTreeMap::new(),
            classes: BTreeMap::new(),
            mlfq: Mlfq::new(config),
            index: SearchIndex::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn graphs(&self) -> impl DoubleEndedIterator<Item = &StoredGraph> {
        self.graphs.values()
    }

    pub fn graph(&self, id: GraphId) -> Option<&StoredGraph> {
        self.graphs.get(&id)
    }

    pub fn by_canonical(&self, key: &str) -> Option<GraphId> {
        self.by_canonical.get(key).copied()
    }

    pub fn comments(&self, id: GraphId) -> &[Comment] {
        self.comments.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn embeddings(&self, id: GraphId) -> &[Embedding] {
        self.embeddings.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn marks(&self, id: GraphId) -> impl Iterator<Item = &InterestingMark> {
        self.marks.get(&id).into_iter().flatten()
    }

    pub fn classes(&self) -> impl Iterator<Item = &GraphClass> {
        self.classes.values()
    }

    pub fn class(&self, slug: &str) -> Option<&GraphClass> {
        self.classes.get(slug)
    }

    pub fn mlfq(&self) -> &Mlfq {
        &self.mlfq
    }

    pub fn index(&self) -> &SearchIndex {
        &self.index
    }

    pub fn status(&self, id: GraphId, inv: InvariantId) -> Option<&JobStatus> {
        self.mlfq.record(id, inv)
    }

    pub fn value(&self, id: GraphId, inv: InvariantId) -> Option<&InvariantValue> {
        self.status(id, inv).and_then(JobStatus::value)
    }

    pub fn max_id(&self) -> GraphId {
        self.graphs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn detail(&self, id: GraphId) -> Option<GraphDetail> {
        let g = self.graphs.get(&id)?;
        let invariants = InvariantId::ALL
            .iter()
            .map(|&inv| {
                let status = self.status(id, inv).cloned().unwrap_or(JobStatus::Pending);
                InvariantRow {
                    invariant: inv,
                    name: inv.name(),
                    status: status.as_str(),
                    value: status.value().cloned(),
                    display: status.label(),
                }
            })
            .collect();
        Some(GraphDetail {
            id,
            name: g.name.clone(),
            uploader: g.uploader.clone(),
            uploaded_at: g.uploaded_at,
            order: g.graph.order(),
            size: g.graph.size(),
            graph6: g.graph6.clone(),
            canonical: g.canonical.clone(),
            adjacency_matrix: adjacency_matrix_print(&g.graph),
            adjacency_list: adjacency_list_print(&g.graph),
            invariants,
            comments: self.comments(id).to_vec(),
            embeddings: self.embeddings(id).to_vec(),
            marks: self.marks(id).cloned().collect(),
        })
    }

    fn require(&self, id: GraphId) -> Result<&StoredGraph, StoreError> {
        self.graphs.get(&id).ok_or_else(|| StoreError::NotFound(format!("graph {id}")))
    }

    fn insert_graph(&mut self, g: StoredGraph) {
        self.by_canonical.insert(g.canonical.clone(), g.id);
        self.graphs.insert(g.id, g);
    }

    fn insert_mark(&mut self, id: GraphId, mark: InterestingMark) -> bool {
        let inv = mark.invariant;
        let added = self.marks.entry(id).or_default().insert(mark);
        if added {
            self.index.add_mark(id, inv);
        }
        added
    }

    fn finish_job(&mut self, job: JobId, value: InvariantValue) -> Result<(), StoreError> {
        let (graph, inv) = {
            let j = self.mlfq.job(job).ok_or(SchedulerError::UnknownJob(job))?;
            (j.graph, j.invariant)
        };
        self.mlfq.complete(job, value.clone())?;
        self.index.record_done(graph, inv, &value);
        Ok(())
    }

    /// Resubmits records left without a live job, then returns stranded
    /// computing jobs to pending.
    fn recover(&mut self, now_ms: u64) {
        let orphans: Vec<(GraphId, InvariantId)> = self
            .mlfq
            .records()
            .filter(|(_, _, s)| !s.is_final())
            .map(|(g, i, _)| (g, i))
            .filter(|&(g, i)| self.mlfq.live_job(g, i).is_none())
            .collect();
        for (g, i) in orphans {
            self.mlfq.submit(g, &[i], now_ms);
        }
        self.mlfq.recover();
    }

    fn apply(&mut self, op: &Op) -> Result<(), StoreError> {
        match op {
            Op::Upload { id, graph6, canonical, name, author, at_ms } => {
                let graph = graph6_decode(graph6)?;
                self.insert_graph(StoredGraph {
                    id: *id,
                    canonical: canonical.clone(),
                    graph6: graph6.clone(),
                    name: name.clone(),
                    uploader: author.clone(),
                    uploaded_at: Timestamp(*at_ms),
                    graph,
                });
                self.mlfq.submit(*id, InvariantId::ALL, *at_ms);
            }
            Op::Comment { graph, author, at_ms, text } => {
                self.require(*graph)?;
                self.comments.entry(*graph).or_default().push(Comment {
                    author: author.clone(),
                    at: Timestamp(*at_ms),
                    text: text.clone(),
                });
            }
            Op::Embedding { graph, author, at_ms, coords } => {
                self.require(*graph)?;
                let list = self.embeddings.entry(*graph).or_default();
                let seq = list.len() as u32 + 1;
                list.push(Embedding { seq, coords: coords.clone(), author: author.clone(), created_at: Timestamp(*at_ms) });
            }
            Op::Mark { graph, invariant, author } => {
                self.require(*graph)?;
                self.insert_mark(*graph, InterestingMark { invariant: *invariant, author: author.clone() });
            }
            Op::ImportClass { slug, description, lines } => {
                let mut lists: BTreeMap<usize, Vec<String>> = BTreeMap::new();
                for line in lines {
                    let g = graph6_decode(line)?;
                    lists.entry(g.order()).or_default().push(line.clone());
                }
                let class = self.classes.entry(slug.clone()).or_insert_with(|| GraphClass {
                    slug: slug.clone(),
                    ..GraphClass::default()
                });
                if let Some(d) = description {
                    class.description = d.clone();
                }
                class.lists.extend(lists);
            }
            Op::Dispatch { job } => {
                let d = self.mlfq.dispatch();
                if d.as_ref().map(|d| d.job) != Some(*job) {
                    return Err(StoreError::Journal {
                        line: 0,
                        message: format!("dispatch of job {job} does not replay"),
                    });
                }
            }
            Op::Complete { job, value } => {
                let inv = self.mlfq.job(*job).ok_or(SchedulerError::UnknownJob(*job))?.invariant;
                let value = inv
                    .parse_value(value)
                    .map_err(|e| StoreError::Journal { line: 0, message: e.to_string() })?;
                self.finish_job(*job, value)?;
            }
            Op::Expire { job, at_ms } => {
                self.mlfq.expire(*job, *at_ms)?;
            }
            Op::Release { job } => self.mlfq.release(*job)?,
            Op::Recover { at_ms } => self.recover(*at_ms),
        }
        Ok(())
    }
}

struct Inner {
    state: StoreState,
    journal: Option<Journal>,
}

impl Inner {
    fn commit(&mut self, op: Op) -> Result<(), StoreError> {
        self.state.apply(&op)?;
        self.log(&op);
        Ok(())
    }

    fn log(&mut self, op: &Op) {
        if let Some(j) = self.journal.as_mut() {
            if let Err(e) = j.append(op) {
                tracing::error!(error = %e, "journal append failed; state is ahead of disk");
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct StoreOptions {
    pub queue: QueueConfig,
    /// fsync the journal after every mutation.
    pub durable: bool,
}

impl Default for StoreOptions {
    fn default() -> Self {
        StoreOptions { queue: QueueConfig::default(), durable: true }
    }
}

pub struct Store {
    inner: RwLock<Inner>,
    clock: Arc<dyn Clock>,
    dir: Option<PathBuf>,
}

const SNAPSHOT: &str = "snapshot.hogdump";
const JOURNAL: &str = "journal.jsonl";

fn check_author(author: Option<&str>) -> Result<String, StoreError> {
    let a = author.ok_or(StoreError::Unauthenticated)?;
    if a.is_empty() || a.chars().any(|c| c.is_whitespace() || c.is_control()) {
        return Err(StoreError::InvalidAuthor(a.to_string()));
    }
    Ok(a.to_string())
}

fn check_slug(slug: &str) -> Result<(), StoreError> {
    let ok = !slug.is_empty() && slug.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-' || c == '_');
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidSlug(slug.to_string()))
    }
}

fn clean_name(name: Option<&str>) -> Option<String> {
    name.map(str::trim).filter(|s| !s.is_empty()).map(str::to_string)
}

impl Store {
    pub fn in_memory(queue: QueueConfig) -> Self {
        Self::in_memory_with_clock(queue, Arc::new(SystemClock))
    }

    pub fn in_memory_with_clock(queue: QueueConfig, clock: Arc<dyn Clock>) -> Self {
        Store { inner: RwLock::new(Inner { state: StoreState::new(queue), journal: None }), clock, dir: None }
    }

    /// Opens (or creates) a store in `dir`: loads the snapshot, replays the
    /// journal and compacts both into a fresh snapshot.
    pub fn open(dir: impl AsRef<Path>, options: StoreOptions) -> Result<Self, StoreError> {
        Self::open_with_clock(dir, options, Arc::new(SystemClock))
    }

    pub fn open_with_clock(dir: impl AsRef<Path>, options: StoreOptions, clock: Arc<dyn Clock>) -> Result<Self, StoreError> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir)?;
        let snapshot = dir.join(SNAPSHOT);
        let mut state = if snapshot.exists() {
            dump::parse(&std::fs::read_to_string(&snapshot)?, options.queue.clone())?
        } else {
            StoreState::new(options.queue.clone())
        };
        let journal_path = dir.join(JOURNAL);
        for (line, op) in journal::read(&journal_path)? {
            state.apply(&op).map_err(|e| StoreError::Journal { line, message: e.to_string() })?;
        }
        let store = Store {
            inner: RwLock::new(Inner { state, journal: None }),
            clock,
            dir: Some(dir),
        };
        store.checkpoint()?;
        store.inner.write().journal = Some(Journal::create(&journal_path, options.durable)?);
        Ok(store)
    }

    /// Writes the current state as the snapshot and empties the journal.
    pub fn checkpoint(&self) -> Result<(), StoreError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let mut inner = self.inner.write();
        let text = dump::write(&inner.state);
        let tmp = dir.join(format!("{SNAPSHOT}.tmp"));
        {
            use std::io::Write;
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, dir.join(SNAPSHOT))?;
        if let Some(j) = inner.journal.as_mut() {
            j.truncate()?;
        } else {
            std::fs::File::create(dir.join(JOURNAL))?;
        }
        Ok(())
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn now_ms(&self) -> u64 {
        self.clock.now_ms()
    }

    /// Runs `f` against a consistent snapshot of the state.
    pub fn read<R>(&self, f: impl FnOnce(&StoreState) -> R) -> R {
        f(&self.inner.read().state)
    }

    pub fn len(&self) -> usize {
        self.read(StoreState::len)
    }

    pub fn is_empty(&self) -> bool {
        self.read(StoreState::is_empty)
    }

    pub fn upload(&self, encoded: &EncodedGraph, meta: UploadMeta, author: Option<&str>) -> Result<UploadOutcome, StoreError> {
        let author = check_author(author)?;
        let graph = encoded.decode()?;
        self.upload_graph(&graph, meta, &author)
    }

    fn upload_graph(&self, graph: &Graph, meta: UploadMeta, author: &str) -> Result<UploadOutcome, StoreError> {
        let comments: Vec<String> = meta.comments.iter().map(|c| c.trim().to_string()).filter(|c| !c.is_empty()).collect();
        // the expensive part runs before taking the lock
        let canonical = canonical_key(graph);
        let graph6 = graph6_encode(graph)?;
        let mut inner = self.inner.write();
        if let Some(id) = inner.state.by_canonical(&canonical) {
            return Ok(UploadOutcome::DuplicateOf(id));
        }
        let id = inner.state.max_id() + 1;
        let at_ms = self.clock.now_ms();
        inner.commit(Op::Upload { id, graph6, canonical, name: clean_name(meta.name.as_deref()), author: author.to_string(), at_ms })?;
        for text in comments {
            inner.commit(Op::Comment { graph: id, author: author.to_string(), at_ms, text })?;
        }
        for invariant in meta.marks {
            inner.commit(Op::Mark { graph: id, invariant, author: author.to_string() })?;
        }
        Ok(UploadOutcome::Created(id))
    }

    pub fn get_graph(&self, id: GraphId) -> Result<GraphDetail, StoreError> {
        self.read(|s| s.detail(id)).ok_or_else(|| StoreError::NotFound(format!("graph {id}")))
    }

    pub fn graph(&self, id: GraphId) -> Option<Graph> {
        self.read(|s| s.graph(id).map(|g| g.graph.clone()))
    }

    pub fn add_comment(&self, id: GraphId, author: Option<&str>, text: &str) -> Result<(), StoreError> {
        let author = check_author(author)?;
        let text = text.trim();
        if text.is_empty() {
            return Err(StoreError::EmptyComment);
        }
        let mut inner = self.inner.write();
        inner.state.require(id)?;
        let at_ms = self.clock.now_ms();
        inner.commit(Op::Comment { graph: id, author, at_ms, text: text.to_string() })
    }

    /// Returns the new embedding's sequence number.
    pub fn add_embedding(&self, id: GraphId, author: Option<&str>, coords: Vec<[f64; 2]>) -> Result<u32, StoreError> {
        let author = check_author(author)?;
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(StoreError::NonFiniteCoordinate);
        }
        let mut inner = self.inner.write();
        let n = inner.state.require(id)?.graph.order();
        if coords.len() != n {
            return Err(StoreError::CoordinateCountMismatch { expected: n, found: coords.len() });
        }
        let at_ms = self.clock.now_ms();
        inner.commit(Op::Embedding { graph: id, author, at_ms, coords })?;
        Ok(inner.state.embeddings(id).len() as u32)
    }

    /// Returns false when this author had already marked the invariant.
    pub fn add_mark(&self, id: GraphId, invariant: InvariantId, author: Option<&str>) -> Result<bool, StoreError> {
        let author = check_author(author)?;
        let mut inner = self.inner.write();
        inner.state.require(id)?;
        let mark = InterestingMark { invariant, author: author.clone() };
        if inner.state.marks.get(&id).is_some_and(|m| m.contains(&mark)) {
            return Ok(false);
        }
        inner.commit(Op::Mark { graph: id, invariant, author })?;
        Ok(true)
    }

    /// Imports a graph6 list file into a class. Lists of orders present in
    /// the file replace earlier lists of the same order. Nothing is stored
    /// if any line fails to decode.
    pub fn import_class(&self, slug: &str, description: Option<&str>, text: &str) -> Result<usize, StoreError> {
        check_slug(slug)?;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end_matches('\r');
            let line = if i == 0 { line.strip_prefix(GRAPH6_HEADER).unwrap_or(line) } else { line };
            if line.trim().is_empty() {
                continue;
            }
            graph6_decode(line).map_err(|source| StoreError::ClassLine { line: i + 1, source })?;
            lines.push(line.to_string());
        }
        let count = lines.len();
        self.inner.write().commit(Op::ImportClass {
            slug: slug.to_string(),
            description: description.map(str::to_string),
            lines,
        })?;
        Ok(count)
    }

    /// Graph6 lines of a class, optionally restricted to one order.
    pub fn list_class(&self, slug: &str, order: Option<usize>) -> Result<Vec<String>, StoreError> {
        self.read(|s| {
            let class = s.class(slug).ok_or_else(|| StoreError::NotFound(format!("class {slug}")))?;
            Ok(match order {
                Some(n) => class.lists.get(&n).cloned().unwrap_or_default(),
                None => class.lists.values().flatten().cloned().collect(),
            })
        })
    }

    pub fn classes(&self) -> Vec<GraphClass> {
        self.read(|s| s.classes().cloned().collect())
    }

    /// The whole store in the interchange format.
    pub fn dump_string(&self) -> String {
        self.read(dump::write)
    }

    pub fn dump(&self, path: impl AsRef<Path>) -> Result<(), StoreError> {
        std::fs::write(path, self.dump_string())?;
        Ok(())
    }

    /// An in-memory store holding the dumped state.
    pub fn restore_str(text: &str, queue: QueueConfig, clock: Arc<dyn Clock>) -> Result<Self, StoreError> {
        let state = dump::parse(text, queue)?;
        Ok(Store { inner: RwLock::new(Inner { state, journal: None }), clock, dir: None })
    }

    pub fn restore(path: impl AsRef<Path>, queue: QueueConfig) -> Result<Self, StoreError> {
        Self::restore_str(&std::fs::read_to_string(path)?, queue, Arc::new(SystemClock))
    }

    /// Replaces the whole state with a dump, journaling a fresh snapshot.
    pub fn replace_with_dump(&self, text: &str) -> Result<(), StoreError> {
        let queue = self.read(|s| s.mlfq.config().clone());
        let state = dump::parse(text, queue)?;
        self.inner.write().state = state;
        self.checkpoint()
    }

    /// Startup step: stranded computing jobs return to pending and records
    /// without a live job are resubmitted.
    pub fn recover(&self) {
        let at_ms = self.clock.now_ms();
        let _ = self.inner.write().commit(Op::Recover { at_ms });
    }

    pub fn queue_lengths(&self) -> Vec<usize> {
        self.read(|s| s.mlfq.queue_lengths())
    }

    pub fn is_idle(&self) -> bool {
        self.read(|s| s.mlfq.is_idle())
    }
}

impl JobQueue for Store {
    fn dispatch(&self) -> Option<Dispatched> {
        let mut inner = self.inner.write();
        let d = inner.state.mlfq.dispatch()?;
        inner.log(&Op::Dispatch { job: d.job });
        Some(d)
    }

    fn complete(&self, job: JobId, value: InvariantValue) {
        let value = value.to_string();
        if let Err(e) = self.inner.write().commit(Op::Complete { job, value }) {
            tracing::warn!(job, error = %e, "completion ignored");
        }
    }

    fn expire(&self, job: JobId) {
        let at_ms = self.clock.now_ms();
        if let Err(e) = self.inner.write().commit(Op::Expire { job, at_ms }) {
            tracing::warn!(job, error = %e, "expiry ignored");
        }
    }

    fn release(&self, job: JobId) {
        if let Err(e) = self.inner.write().commit(Op::Release { job }) {
            tracing::warn!(job, error = %e, "release ignored");
        }
    }
}

/// Computes invariants of stored graphs for the worker pool.
pub struct StoreComputer {
    store: Arc<Store>,
}

impl StoreComputer {
    pub fn new(store: Arc<Store>) -> Self {
        StoreComputer { store }
    }
}

impl Computer for StoreComputer {
    fn compute(&self, job: &Dispatched, budget: &Budget) -> Result<InvariantValue, Interrupted> {
        // a missing graph cannot happen without deletion; treat it as overrun
        let g = self.store.graph(job.graph).ok_or(Interrupted)?;
        invariants::compute(job.invariant, &g, budget)
    }
}

#[cfg(test)]
mod tests;

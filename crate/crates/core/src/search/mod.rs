//! Conjunctive queries over stored graphs.
//!
//! A graph matches when every predicate holds. Numeric and boolean
//! predicates only match graphs whose invariant is done; pending, computing
//! and timed-out values are unknown and never match.

mod index;
mod wire;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Write;
use std::ops::Bound;

use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::canonical::canonical_key;
use crate::codecs::{write_record, CodecError, Format};
use crate::graph::Graph;
use crate::invariants::{InvariantId, InvariantValue, Kind};
use crate::scheduler::{GraphId, JobStatus};
use crate::store::StoreState;

pub use index::{Key, SearchIndex};
pub use wire::{WirePage, WirePredicate, WireQuery, WireSort};

/// Tolerance for comparisons on real-valued invariants.
pub const REAL_TOLERANCE: f64 = 1e-9;
pub const MAX_LIMIT: usize = 1000;
pub const DEFAULT_LIMIT: usize = 50;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("malformed query{}: {message}", at(*.index))]
    MalformedQuery { index: Option<usize>, message: String },
    #[error("unknown invariant {name:?}{}", at(*.index))]
    UnknownInvariant { index: Option<usize>, name: String },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at(index: Option<usize>) -> String {
    index.map(|i| format!(" in predicate {i}")).unwrap_or_default()
}

fn malformed(index: Option<usize>, message: impl Into<String>) -> SearchError {
    SearchError::MalformedQuery { index, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CmpOp {
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn parse(s: &str) -> Option<CmpOp> {
        Some(match s {
            "=" | "==" | "eq" => CmpOp::Eq,
            "!=" | "<>" | "≠" | "ne" => CmpOp::Ne,
            "<" | "lt" => CmpOp::Lt,
            "<=" | "≤" | "le" => CmpOp::Le,
            ">" | "gt" => CmpOp::Gt,
            ">=" | "≥" | "ge" => CmpOp::Ge,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

/// A query operand: integers stay exact.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Int(BigInt),
    Real(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Int(i) => i.to_f64().unwrap_or(f64::NAN),
            Number::Real(x) => *x,
        }
    }
}

impl From<i64> for Number {
    fn from(v: i64) -> Self {
        Number::Int(v.into())
    }
}

impl From<f64> for Number {
    fn from(v: f64) -> Self {
        Number::Real(v)
    }
}

impl std::fmt::Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Number::Int(i) => write!(f, "{i}"),
            Number::Real(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    NumericCmp { invariant: InvariantId, op: CmpOp, value: Number },
    /// Inclusive on both ends.
    NumericRange { invariant: InvariantId, lo: Number, hi: Number },
    BoolIs { invariant: InvariantId, value: bool },
    MarkedInteresting { invariant: InvariantId },
    TextContains(String),
    IdEquals(GraphId),
    /// Holds the canonical key of the target graph.
    IsomorphicTo { canonical: String },
}

impl Predicate {
    pub fn cmp(invariant: InvariantId, op: CmpOp, value: impl Into<Number>) -> Self {
        Predicate::NumericCmp { invariant, op, value: value.into() }
    }

    pub fn range(invariant: InvariantId, lo: impl Into<Number>, hi: impl Into<Number>) -> Self {
        Predicate::NumericRange { invariant, lo: lo.into(), hi: hi.into() }
    }

    pub fn isomorphic_to(g: &Graph) -> Self {
        Predicate::IsomorphicTo { canonical: canonical_key(g) }
    }

    fn validate(&self, index: Option<usize>) -> Result<(), SearchError> {
        let numeric = |inv: InvariantId| {
            if inv.kind().is_numeric() {
                Ok(())
            } else {
                Err(malformed(index, format!("{inv} is not numeric")))
            }
        };
        let finite = |n: &Number| {
            if n.to_f64().is_nan() {
                Err(malformed(index, "operand is not a number"))
            } else {
                Ok(())
            }
        };
        match self {
            Predicate::NumericCmp { invariant, value, .. } => {
                numeric(*invariant)?;
                finite(value)
            }
            Predicate::NumericRange { invariant, lo, hi } => {
                numeric(*invariant)?;
                finite(lo)?;
                finite(hi)?;
                if num_cmp(lo, hi) == Ordering::Greater {
                    return Err(malformed(index, format!("empty range: {lo} > {hi}")));
                }
                Ok(())
            }
            Predicate::BoolIs { invariant, .. } => {
                if invariant.kind() == Kind::Boolean {
                    Ok(())
                } else {
                    Err(malformed(index, format!("{invariant} is not boolean")))
                }
            }
            Predicate::TextContains(t) if t.trim().is_empty() => Err(malformed(index, "empty search text")),
            _ => Ok(()),
        }
    }
}

fn num_cmp(a: &Number, b: &Number) -> Ordering {
    match (a, b) {
        (Number::Int(x), Number::Int(y)) => x.cmp(y),
        (Number::Int(x), Number::Real(y)) => int_real_cmp(x, *y),
        (Number::Real(x), Number::Int(y)) => int_real_cmp(y, *x).reverse(),
        (Number::Real(x), Number::Real(y)) => x.total_cmp(y),
    }
}

/// Exact comparison of an integer with a non-NaN float.
fn int_real_cmp(i: &BigInt, x: f64) -> Ordering {
    if x == f64::INFINITY {
        return Ordering::Less;
    }
    if x == f64::NEG_INFINITY {
        return Ordering::Greater;
    }
    let floor = BigInt::from_f64(x.floor()).expect("finite");
    match i.cmp(&floor) {
        Ordering::Equal if x.fract() != 0.0 => Ordering::Less,
        o => o,
    }
}

fn real_matches(x: f64, op: CmpOp, y: f64) -> bool {
    let eq = (x - y).abs() <= REAL_TOLERANCE;
    match op {
        CmpOp::Eq => eq,
        CmpOp::Ne => !eq,
        CmpOp::Lt => x < y && !eq,
        CmpOp::Le => x < y || eq,
        CmpOp::Gt => x > y && !eq,
        CmpOp::Ge => x > y || eq,
    }
}

fn ordering_matches(o: Ordering, op: CmpOp) -> bool {
    match op {
        CmpOp::Eq => o == Ordering::Equal,
        CmpOp::Ne => o != Ordering::Equal,
        CmpOp::Lt => o == Ordering::Less,
        CmpOp::Le => o != Ordering::Greater,
        CmpOp::Gt => o == Ordering::Greater,
        CmpOp::Ge => o != Ordering::Less,
    }
}

/// Whether a finished value satisfies `value op operand`. Integers compare
/// exactly, reals within [`REAL_TOLERANCE`].
pub fn value_matches(value: &InvariantValue, op: CmpOp, operand: &Number) -> bool {
    match value {
        InvariantValue::Integer(i) => ordering_matches(num_cmp(&Number::Int(i.clone()), operand), op),
        InvariantValue::Real(x) => real_matches(*x, op, operand.to_f64()),
        InvariantValue::Bool(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SortDir {
    #[default]
    Asc,
    Desc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortKey {
    #[default]
    Id,
    Invariant(InvariantId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sort {
    pub key: SortKey,
    pub dir: SortDir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Page {
    pub offset: usize,
    pub limit: usize,
}

impl Default for Page {
    fn default() -> Self {
        Page { offset: 0, limit: DEFAULT_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Query {
    pub predicates: Vec<Predicate>,
    pub sort: Sort,
    pub page: Page,
    pub columns: Vec<InvariantId>,
}

impl Query {
    pub fn new(predicates: Vec<Predicate>) -> Self {
        Query { predicates, ..Query::default() }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        for (i, p) in self.predicates.iter().enumerate() {
            p.validate(Some(i))?;
        }
        if let SortKey::Invariant(inv) = self.sort.key {
            if !inv.kind().is_numeric() {
                return Err(malformed(None, format!("cannot sort by non-numeric {inv}")));
            }
        }
        if self.page.limit > MAX_LIMIT {
            return Err(malformed(None, format!("limit {} exceeds {MAX_LIMIT}", self.page.limit)));
        }
        Ok(())
    }
}

/// Appends predicates to a query.
pub fn refine(mut q: Query, extra: impl IntoIterator<Item = Predicate>) -> Result<Query, SearchError> {
    q.predicates.extend(extra);
    q.validate()?;
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub invariant: InvariantId,
    pub status: &'static str,
    pub value: Option<InvariantValue>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub id: GraphId,
    pub name: Option<String>,
    /// Sequence number of the embedding to draw, if any.
    pub thumbnail: Option<u32>,
    pub columns: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultPage {
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub rows: Vec<Row>,
}

pub fn matches(s: &StoreState, id: GraphId, p: &Predicate) -> bool {
    let Some(g) = s.graph(id) else { return false };
    match p {
        Predicate::NumericCmp { invariant, op, value } => {
            s.value(id, *invariant).is_some_and(|v| value_matches(v, *op, value))
        }
        Predicate::NumericRange { invariant, lo, hi } => s
            .value(id, *invariant)
            .is_some_and(|v| value_matches(v, CmpOp::Ge, lo) && value_matches(v, CmpOp::Le, hi)),
        Predicate::BoolIs { invariant, value } => s.value(id, *invariant) == Some(&InvariantValue::Bool(*value)),
        Predicate::MarkedInteresting { invariant } => s.marks(id).any(|m| m.invariant == *invariant),
        Predicate::TextContains(text) => {
            let needle = text.to_lowercase();
            g.name.as_ref().is_some_and(|n| n.to_lowercase().contains(&needle))
                || s.comments(id).iter().any(|c| c.text.to_lowercase().contains(&needle))
        }
        Predicate::IdEquals(want) => id == *want,
        Predicate::IsomorphicTo { canonical } => g.canonical == *canonical,
    }
}

/// Smallest integer key that can satisfy `>= n`; `None` when none can.
fn int_bound_below(n: &Number) -> Option<Bound<Key>> {
    match n {
        Number::Int(i) => Some(Bound::Included(Key::Int(i.clone()))),
        Number::Real(x) if x.is_finite() => Some(Bound::Included(Key::Int(BigInt::from_f64(x.floor()).expect("finite")))),
        Number::Real(x) if *x > 0.0 => None,
        Number::Real(_) => Some(Bound::Unbounded),
    }
}

/// Largest integer key that can satisfy `<= n`; `None` when none can.
fn int_bound_above(n: &Number) -> Option<Bound<Key>> {
    match n {
        Number::Int(i) => Some(Bound::Included(Key::Int(i.clone()))),
        Number::Real(x) if x.is_finite() => Some(Bound::Included(Key::Int(BigInt::from_f64(x.ceil()).expect("finite")))),
        Number::Real(x) if *x < 0.0 => None,
        Number::Real(_) => Some(Bound::Unbounded),
    }
}

enum KeyRange {
    /// Every finished value may match.
    All,
    Empty,
    Keys(Bound<Key>, Bound<Key>),
}

/// Conservative key range containing every value that can satisfy the
/// comparison.
fn cmp_range(kind: Kind, op: CmpOp, n: &Number) -> KeyRange {
    let (lo, hi) = match op {
        CmpOp::Ne => return KeyRange::All,
        CmpOp::Eq => (true, true),
        CmpOp::Gt | CmpOp::Ge => (true, false),
        CmpOp::Lt | CmpOp::Le => (false, true),
    };
    let (a, b) = match kind {
        Kind::Integer => (
            if lo { int_bound_below(n) } else { Some(Bound::Unbounded) },
            if hi { int_bound_above(n) } else { Some(Bound::Unbounded) },
        ),
        _ => {
            let x = n.to_f64();
            let slack = 2.0 * REAL_TOLERANCE;
            (
                Some(if lo { Bound::Included(Key::Real(x - slack)) } else { Bound::Unbounded }),
                Some(if hi { Bound::Included(Key::Real(x + slack)) } else { Bound::Unbounded }),
            )
        }
    };
    match (a, b) {
        (Some(a), Some(b)) => KeyRange::Keys(a, b),
        _ => KeyRange::Empty,
    }
}

fn predicate_range(p: &Predicate) -> Option<(InvariantId, KeyRange)> {
    match p {
        Predicate::NumericCmp { invariant, op, value } => Some((*invariant, cmp_range(invariant.kind(), *op, value))),
        Predicate::NumericRange { invariant, lo, hi } => {
            let kind = invariant.kind();
            let range = match (cmp_range(kind, CmpOp::Ge, lo), cmp_range(kind, CmpOp::Le, hi)) {
                (KeyRange::Keys(a, _), KeyRange::Keys(_, b)) => KeyRange::Keys(a, b),
                _ => KeyRange::Empty,
            };
            Some((*invariant, range))
        }
        _ => None,
    }
}

/// Either an explicit candidate set or every graph.
enum Candidates {
    All,
    Set(BTreeSet<GraphId>),
}

fn estimate(s: &StoreState, p: &Predicate) -> usize {
    let idx = s.index();
    if let Some((inv, range)) = predicate_range(p) {
        return match range {
            KeyRange::All => idx.done_count(inv),
            KeyRange::Empty => 0,
            KeyRange::Keys(lo, hi) => idx.range_count(inv, lo, hi),
        };
    }
    match p {
        Predicate::BoolIs { invariant, value } => idx.bool_count(*invariant, *value),
        Predicate::MarkedInteresting { invariant } => idx.marked_count(*invariant),
        Predicate::IdEquals(_) | Predicate::IsomorphicTo { .. } => 1,
        _ => usize::MAX,
    }
}

fn candidates(s: &StoreState, p: &Predicate) -> Candidates {
    let idx = s.index();
    if let Some((inv, range)) = predicate_range(p) {
        return match range {
            KeyRange::All => Candidates::All,
            KeyRange::Empty => Candidates::Set(BTreeSet::new()),
            KeyRange::Keys(lo, hi) => Candidates::Set(idx.range(inv, lo, hi)),
        };
    }
    match p {
        Predicate::BoolIs { invariant, value } => Candidates::Set(idx.with_bool(*invariant, *value)),
        Predicate::MarkedInteresting { invariant } => Candidates::Set(idx.marked(*invariant)),
        Predicate::IdEquals(id) => Candidates::Set(s.graph(*id).map(|g| g.id).into_iter().collect()),
        Predicate::IsomorphicTo { canonical } => Candidates::Set(s.by_canonical(canonical).into_iter().collect()),
        _ => Candidates::All,
    }
}

fn sort_value(s: &StoreState, id: GraphId, key: SortKey) -> Option<Key> {
    match key {
        SortKey::Id => Some(Key::Int(id.into())),
        SortKey::Invariant(inv) => s.value(id, inv).and_then(Key::of),
    }
}

/// Ids of all matches in result order.
pub fn matching_ids(s: &StoreState, q: &Query) -> Result<Vec<GraphId>, SearchError> {
    q.validate()?;
    let driver = q.predicates.iter().min_by_key(|p| estimate(s, p));
    let mut ids: Vec<GraphId> = match driver.map(|p| candidates(s, p)) {
        Some(Candidates::Set(set)) => set.into_iter().collect(),
        _ => s.graphs().map(|g| g.id).collect(),
    };
    ids.retain(|&id| q.predicates.iter().all(|p| matches(s, id, p)));
    if q.sort.key != SortKey::Id || q.sort.dir == SortDir::Desc {
        let mut keyed: Vec<(Option<Key>, GraphId)> = ids.iter().map(|&id| (sort_value(s, id, q.sort.key), id)).collect();
        keyed.sort_by(|(a, ia), (b, ib)| {
            let by_value = match (a, b) {
                (Some(x), Some(y)) => match q.sort.dir {
                    SortDir::Asc => x.cmp(y),
                    SortDir::Desc => y.cmp(x),
                },
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            };
            by_value.then(ia.cmp(ib))
        });
        ids = keyed.into_iter().map(|(_, id)| id).collect();
    }
    Ok(ids)
}

fn cell(s: &StoreState, id: GraphId, inv: InvariantId) -> Cell {
    let status = s.status(id, inv).cloned().unwrap_or(JobStatus::Pending);
    Cell { invariant: inv, status: status.as_str(), value: status.value().cloned(), display: status.label() }
}

pub fn evaluate(s: &StoreState, q: &Query) -> Result<ResultPage, SearchError> {
    let ids = matching_ids(s, q)?;
    let rows = ids
        .iter()
        .skip(q.page.offset)
        .take(q.page.limit)
        .map(|&id| {
            let g = s.graph(id).expect("matched graphs exist");
            Row {
                id,
                name: g.name.clone(),
                thumbnail: s.embeddings(id).first().map(|e| e.seq),
                columns: q.columns.iter().map(|&inv| cell(s, id, inv)).collect(),
            }
        })
        .collect();
    Ok(ResultPage { total: ids.len(), offset: q.page.offset, limit: q.page.limit, rows })
}

/// Writes every match (ignoring paging) in result order. Graph6 output
/// reuses the stored text.
pub fn export_results(s: &StoreState, q: &Query, format: Format, out: &mut dyn Write) -> Result<usize, SearchError> {
    let ids = matching_ids(s, q)?;
    let mut buf = Vec::new();
    for &id in &ids {
        let g = s.graph(id).expect("matched graphs exist");
        buf.clear();
        if format == Format::Graph6 {
            buf.extend_from_slice(g.graph6.as_bytes());
            buf.push(b'\n');
        } else {
            write_record(format, &g.graph, &mut buf)?;
        }
        out.write_all(&buf)?;
    }
    Ok(ids.len())
}

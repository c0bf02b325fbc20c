//! Per-invariant sorted indexes over finished invariant values.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::Bound;

use num_bigint::BigInt;

use crate::invariants::{InvariantId, InvariantValue};
use crate::scheduler::GraphId;

/// Index key; one invariant only ever holds one variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Key {
    Int(BigInt),
    Real(f64),
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Key::Int(a), Key::Int(b)) => a.cmp(b),
            (Key::Real(a), Key::Real(b)) => a.total_cmp(b),
            (Key::Int(_), Key::Real(_)) => Ordering::Less,
            (Key::Real(_), Key::Int(_)) => Ordering::Greater,
        }
    }
}

impl Key {
    pub fn of(v: &InvariantValue) -> Option<Key> {
        match v {
            InvariantValue::Integer(i) => Some(Key::Int(i.clone())),
            InvariantValue::Real(x) => Some(Key::Real(*x)),
            InvariantValue::Bool(_) => None,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SearchIndex {
    numeric: HashMap<InvariantId, BTreeMap<Key, BTreeSet<GraphId>>>,
    boolean: HashMap<(InvariantId, bool), BTreeSet<GraphId>>,
    marks: HashMap<InvariantId, BTreeMap<GraphId, usize>>,
    done: HashMap<InvariantId, usize>,
}

impl SearchIndex {
    pub fn record_done(&mut self, graph: GraphId, inv: InvariantId, value: &InvariantValue) {
        *self.done.entry(inv).or_default() += 1;
        match value {
            InvariantValue::Bool(b) => {
                self.boolean.entry((inv, *b)).or_default().insert(graph);
            }
            other => {
                let key = Key::of(other).expect("numeric value");
                self.numeric.entry(inv).or_default().entry(key).or_default().insert(graph);
            }
        }
    }

    pub fn add_mark(&mut self, graph: GraphId, inv: InvariantId) {
        *self.marks.entry(inv).or_default().entry(graph).or_default() += 1;
    }

    pub fn done_count(&self, inv: InvariantId) -> usize {
        self.done.get(&inv).copied().unwrap_or(0)
    }

    /// Graphs whose value lies in the key range.
    pub fn range(&self, inv: InvariantId, lo: Bound<Key>, hi: Bound<Key>) -> BTreeSet<GraphId> {
        let Some(map) = self.numeric.get(&inv) else { return BTreeSet::new() };
        if let (Bound::Included(a) | Bound::Excluded(a), Bound::Included(b) | Bound::Excluded(b)) = (&lo, &hi) {
            if a > b {
                return BTreeSet::new();
            }
        }
        map.range((lo, hi)).flat_map(|(_, ids)| ids.iter().copied()).collect()
    }

    pub fn range_count(&self, inv: InvariantId, lo: Bound<Key>, hi: Bound<Key>) -> usize {
        let Some(map) = self.numeric.get(&inv) else { return 0 };
        if let (Bound::Included(a) | Bound::Excluded(a), Bound::Included(b) | Bound::Excluded(b)) = (&lo, &hi) {
            if a > b {
                return 0;
            }
        }
        map.range((lo, hi)).map(|(_, ids)| ids.len()).sum()
    }

    pub fn with_bool(&self, inv: InvariantId, value: bool) -> BTreeSet<GraphId> {
        self.boolean.get(&(inv, value)).cloned().unwrap_or_default()
    }

    pub fn bool_count(&self, inv: InvariantId, value: bool) -> usize {
        self.boolean.get(&(inv, value)).map_or(0, |s| s.len())
    }

    pub fn marked(&self, inv: InvariantId) -> BTreeSet<GraphId> {
        self.marks.get(&inv).map(|m| m.keys().copied().collect()).unwrap_or_default()
    }

    pub fn marked_count(&self, inv: InvariantId) -> usize {
        self.marks.get(&inv).map_or(0, |m| m.len())
    }
}

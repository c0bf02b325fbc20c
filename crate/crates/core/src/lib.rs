//! Core engine of a searchable database of interesting graphs.
//!
//! The crate is organised bottom-up: [`graph`] holds the in-memory
//! representation, [`codecs`] the interchange formats, [`canonical`] the
//! canonical labeling used for deduplication, [`invariants`] the budgeted
//! invariant computers, [`scheduler`] the multilevel feedback queue that
//! runs them, [`store`] persistence, [`search`] query evaluation and
//! [`layout`] drawing and vector export.

pub mod bitset;
pub mod budget;
pub mod canonical;
pub mod codecs;
pub mod graph;
pub mod invariants;
pub mod layout;
pub mod scheduler;
pub mod search;
pub mod store;

pub use bitset::VertexSet;
pub use budget::{Budget, Interrupted};
pub use graph::{Graph, GraphError, VertexPermutation, DEFAULT_MAX_ORDER};

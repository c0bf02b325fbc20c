use std::sync::Arc;

use super::*;
use crate::codecs::Format;
use crate::graph::VertexPermutation;
use crate::scheduler::VirtualClock;

const PETERSEN: &str = "IheA@GUAo";

fn store() -> (Store, VirtualClock) {
    let clock = VirtualClock::new();
    clock.set_ms(1_700_000_000_000);
    (Store::in_memory_with_clock(QueueConfig::default(), Arc::new(clock.clone())), clock)
}

fn up(s: &Store, g6: &str) -> UploadOutcome {
    s.upload(&EncodedGraph::graph6(g6), UploadMeta::default(), Some("ann")).unwrap()
}

#[test]
fn duplicate_upload_returns_first_id() {
    let (s, _) = store();
    assert_eq!(up(&s, PETERSEN), UploadOutcome::Created(1));
    let g = graph6_decode(PETERSEN).unwrap();
    let p = VertexPermutation::new(vec![3, 9, 0, 1, 7, 2, 8, 4, 5, 6]).unwrap();
    let relabeled = EncodedGraph::encode(Format::AdjacencyList, &g.relabel(&p).unwrap()).unwrap();
    let before = s.dump_string();
    assert_eq!(s.upload(&relabeled, UploadMeta::default(), Some("bob")).unwrap(), UploadOutcome::DuplicateOf(1));
    assert_eq!(s.dump_string(), before);
    assert_eq!(up(&s, "Bw"), UploadOutcome::Created(2));
}

#[test]
fn upload_requires_author_and_valid_payload() {
    let (s, _) = store();
    assert!(matches!(s.upload(&EncodedGraph::graph6("Bw"), UploadMeta::default(), None), Err(StoreError::Unauthenticated)));
    let err = s.upload(&EncodedGraph::graph6("B!"), UploadMeta::default(), Some("ann")).unwrap_err();
    assert!(matches!(err, StoreError::Parse(CodecError::BadCharacter { offset: 1, .. })), "{err:?}");
    assert!(s.is_empty());
}

#[test]
fn detail_lists_all_invariants_pending() {
    let (s, _) = store();
    let meta = UploadMeta { name: Some("Petersen graph".into()), comments: vec!["famous".into()], marks: vec![InvariantId::Girth] };
    let id = s.upload(&EncodedGraph::graph6(PETERSEN), meta, Some("ann")).unwrap().id();
    let d = s.get_graph(id).unwrap();
    assert_eq!(d.invariants.len(), 44);
    assert!(d.invariants.iter().all(|r| r.status == "pending" && r.value.is_none()));
    assert_eq!(d.name.as_deref(), Some("Petersen graph"));
    assert_eq!(d.comments[0].text, "famous");
    assert_eq!(d.marks, vec![InterestingMark { invariant: InvariantId::Girth, author: "ann".into() }]);
    assert_eq!(d.adjacency_list.lines().count(), 10);
    assert!(matches!(s.get_graph(1_000_000_000), Err(StoreError::NotFound(_))));
}

#[test]
fn comments_embeddings_marks() {
    let (s, clock) = store();
    let id = up(&s, "Bw").id();
    assert!(matches!(s.add_comment(id, None, "hi"), Err(StoreError::Unauthenticated)));
    assert!(matches!(s.add_comment(id, Some("ann"), "  "), Err(StoreError::EmptyComment)));
    assert!(matches!(s.add_comment(99, Some("ann"), "x"), Err(StoreError::NotFound(_))));
    s.add_comment(id, Some("ann"), "first").unwrap();
    clock.advance(std::time::Duration::from_millis(5));
    s.add_comment(id, Some("bob"), "second").unwrap();
    assert_eq!(s.add_embedding(id, Some("ann"), vec![[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]]).unwrap(), 1);
    assert_eq!(s.add_embedding(id, Some("bob"), vec![[0.1, 0.0], [1.0, 0.2], [0.5, 0.9]]).unwrap(), 2);
    let err = s.add_embedding(id, Some("ann"), vec![[0.0, 0.0], [1.0, 0.0]]).unwrap_err();
    assert!(matches!(err, StoreError::CoordinateCountMismatch { expected: 3, found: 2 }));
    assert!(s.add_mark(id, InvariantId::Girth, Some("ann")).unwrap());
    assert!(!s.add_mark(id, InvariantId::Girth, Some("ann")).unwrap());
    assert!(s.add_mark(id, InvariantId::Girth, Some("bob")).unwrap());
    let d = s.get_graph(id).unwrap();
    assert_eq!(d.comments.iter().map(|c| c.text.as_str()).collect::<Vec<_>>(), ["first", "second"]);
    assert_eq!(d.embeddings.iter().map(|e| e.seq).collect::<Vec<_>>(), [1, 2]);
    assert_eq!(d.marks.len(), 2);
}

#[test]
fn class_import_is_atomic() {
    let (s, _) = store();
    assert_eq!(s.import_class("tiny", Some("small graphs"), ">>graph6<<A_\nBw\nBg\n").unwrap(), 3);
    assert_eq!(s.list_class("tiny", Some(3)).unwrap(), ["Bw", "Bg"]);
    assert_eq!(s.list_class("tiny", None).unwrap(), ["A_", "Bw", "Bg"]);
    let err = s.import_class("other", None, "A_\nBw\nB!\n").unwrap_err();
    assert!(matches!(err, StoreError::ClassLine { line: 3, .. }), "{err:?}");
    assert!(matches!(s.list_class("other", None), Err(StoreError::NotFound(_))));
    assert!(s.is_empty(), "class lists stay out of the graph table");
}

fn busy_store() -> (Store, VirtualClock) {
    let (s, clock) = store();
    let meta = UploadMeta { name: Some("Petersen \\ graph\twith tab".into()), comments: vec!["line one\nline two".into()], marks: vec![] };
    s.upload(&EncodedGraph::graph6(PETERSEN), meta, Some("ann")).unwrap();
    up(&s, "Bw");
    s.add_embedding(2, Some("ann"), vec![[0.1, 1.0 / 3.0], [-2.0, 1e-300], [5.0, 0.0]]).unwrap();
    s.add_mark(1, InvariantId::Genus, Some("bob")).unwrap();
    s.import_class("cubic", Some("cubic graphs"), "C~\n").unwrap();
    let j = s.dispatch().unwrap();
    s.complete(j.job, InvariantValue::Bool(false));
    let j = s.dispatch().unwrap();
    s.expire(j.job);
    s.dispatch().unwrap();
    (s, clock)
}

#[test]
fn dump_round_trip_is_byte_identical() {
    let (s, clock) = busy_store();
    let text = s.dump_string();
    let r = Store::restore_str(&text, QueueConfig::default(), Arc::new(clock)).unwrap();
    assert_eq!(r.dump_string(), text);
    assert_eq!(r.get_graph(1).unwrap(), s.get_graph(1).unwrap());
    assert!(text.contains("\nI 1 acyclic done false\n"), "{text}");
    assert!(text.contains("\nI 1 bipartite pending\n"));
    assert!(text.contains(&format!("\nI 1 {} computing\n", InvariantId::ALL[2])));
}

#[test]
fn open_replays_journal_and_recovers() {
    let dir = tempfile::tempdir().unwrap();
    let clock = VirtualClock::new();
    let opts = StoreOptions { durable: false, ..StoreOptions::default() };
    let expected = {
        let s = Store::open_with_clock(dir.path(), opts.clone(), Arc::new(clock.clone())).unwrap();
        up(&s, PETERSEN);
        s.add_comment(1, Some("ann"), "hello").unwrap();
        let d = s.dispatch().unwrap();
        s.complete(d.job, InvariantValue::Bool(false));
        s.dispatch().unwrap();
        s.dump_string()
    };
    let s = Store::open_with_clock(dir.path(), opts, Arc::new(clock)).unwrap();
    assert_eq!(s.dump_string(), expected);
    assert_eq!(s.read(|st| st.status(1, InvariantId::Bipartite).cloned()), Some(JobStatus::Computing));
    s.recover();
    assert_eq!(s.read(|st| st.status(1, InvariantId::Bipartite).cloned()), Some(JobStatus::Pending));
    let next = s.dispatch().unwrap();
    assert_eq!(next.invariant, InvariantId::Bipartite);
}

//! Line-oriented interchange format.
//!
//! ```text
//! HOGDUMP 1
//! [N <next job id>]
//! K <slug> <description>
//! L <slug> <graph6>
//! G <id> <canonical graph6> <graph6> [<name>]
//! U <id> <uploader> <iso8601>
//! I <id> <invariant> <status> [<value>]
//! C <id> <author> <iso8601> <text>
//! E <id> <seq> <x0,y0;x1,y1;...> <author> <iso8601>
//! M <id> <invariant> <author>
//! J <job> <id> <invariant> <level> <attempts> <enqueued ms>
//! ```
//!
//! Free text (names, descriptions, comments) escapes backslash, LF, CR and
//! tab. Fields are separated by single spaces; free text runs to the end of
//! the line.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::codecs::graph6_decode;
use crate::invariants::InvariantId;
use crate::scheduler::{GraphId, JobStatus, QueueConfig};

use super::{Comment, Embedding, GraphClass, InterestingMark, StoreError, StoreState, StoredGraph, Timestamp};

pub const DUMP_HEADER: &str = "HOGDUMP 1";

pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn unescape(text: &str) -> Option<String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        out.push(match chars.next()? {
            '\\' => '\\',
            'n' => '\n',
            'r' => '\r',
            't' => '\t',
            _ => return None,
        });
    }
    Some(out)
}

fn coords_text(coords: &[[f64; 2]]) -> String {
    coords.iter().map(|[x, y]| format!("{x},{y}")).collect::<Vec<_>>().join(";")
}

pub(crate) fn write(s: &StoreState) -> String {
    let mut out = String::new();
    out.push_str(DUMP_HEADER);
    out.push('\n');
    if s.mlfq.next_job_id() > 1 {
        let _ = writeln!(out, "N {}", s.mlfq.next_job_id());
    }
    for class in s.classes.values() {
        let _ = writeln!(out, "K {} {}", class.slug, escape(&class.description));
        for line in class.lists.values().flatten() {
            let _ = writeln!(out, "L {} {}", class.slug, line);
        }
    }
    for g in s.graphs.values() {
        let id = g.id;
        let _ = write!(out, "G {id} {} {}", g.canonical, g.graph6);
        if let Some(name) = &g.name {
            let _ = write!(out, " {}", escape(name));
        }
        out.push('\n');
        let _ = writeln!(out, "U {id} {} {}", g.uploader, g.uploaded_at);
        for &inv in InvariantId::ALL {
            let Some(status) = s.mlfq.record(id, inv) else { continue };
            let _ = write!(out, "I {id} {inv} {}", status.as_str());
            if let Some(v) = status.value() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        for c in s.comments(id) {
            let _ = writeln!(out, "C {id} {} {} {}", c.author, c.at, escape(&c.text));
        }
        for e in s.embeddings(id) {
            let _ = writeln!(out, "E {id} {} {} {} {}", e.seq, coords_text(&e.coords), e.author, e.created_at);
        }
        for m in s.marks(id) {
            let _ = writeln!(out, "M {id} {} {}", m.invariant, m.author);
        }
    }
    for j in s.mlfq.jobs() {
        let _ = writeln!(out, "J {} {} {} {} {} {}", j.id, j.graph, j.invariant, j.level, j.attempts, j.enqueued_ms);
    }
    out
}

struct Line<'a> {
    no: usize,
    fields: std::str::SplitN<'a, char>,
}

impl<'a> Line<'a> {
    fn err(&self, message: impl Into<String>) -> StoreError {
        StoreError::Dump { line: self.no, message: message.into() }
    }

    fn next(&mut self, what: &str) -> Result<&'a str, StoreError> {
        let no = self.no;
        self.fields.next().ok_or_else(|| StoreError::Dump { line: no, message: format!("missing {what}") })
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, StoreError> {
        let f = self.next(what)?;
        f.parse().map_err(|_| self.err(format!("invalid {what} {f:?}")))
    }

    fn text(&mut self, what: &str) -> Result<String, StoreError> {
        let f = self.next(what)?;
        unescape(f).ok_or_else(|| self.err(format!("bad escape in {what}")))
    }

    fn invariant(&mut self) -> Result<InvariantId, StoreError> {
        let f = self.next("invariant")?;
        f.parse().map_err(|_| self.err(format!("unknown invariant {f:?}")))
    }

    fn done(&mut self) -> Result<(), StoreError> {
        match self.fields.next() {
            None => Ok(()),
            Some(_) => Err(self.err("trailing fields")),
        }
    }
}

/// Field counts per record type; the last field of free-text records takes
/// the rest of the line.
fn arity(tag: &str) -> Option<usize> {
    Some(match tag {
        "N" => 1,
        "K" => 2,
        "L" => 2,
        "G" => 4,
        "U" => 3,
        "I" => 4,
        "C" => 4,
        "E" => 5,
        "M" => 3,
        "J" => 6,
        _ => return None,
    })
}

fn parse_coords(line: &Line<'_>, text: &str) -> Result<Vec<[f64; 2]>, StoreError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|pair| {
            let (x, y) = pair.split_once(',').ok_or_else(|| line.err(format!("bad coordinate {pair:?}")))?;
            let x: f64 = x.parse().map_err(|_| line.err(format!("bad coordinate {pair:?}")))?;
            let y: f64 = y.parse().map_err(|_| line.err(format!("bad coordinate {pair:?}")))?;
            if x.is_finite() && y.is_finite() {
                Ok([x, y])
            } else {
                Err(line.err("non-finite coordinate"))
            }
        })
        .collect()
}

struct PendingJob {
    id: u64,
    graph: GraphId,
    invariant: InvariantId,
    level: usize,
    attempts: u32,
    enqueued_ms: u64,
}

pub(crate) fn parse(text: &str, queue: QueueConfig) -> Result<StoreState, StoreError> {
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let header = lines.next().map(|(_, l)| l).unwrap_or("");
    if header != DUMP_HEADER {
        return Err(match header.strip_prefix("HOGDUMP ") {
            Some(v) => StoreError::SchemaVersionMismatch { found: v.to_string() },
            None => StoreError::Dump { line: 1, message: "missing HOGDUMP header".into() },
        });
    }
    let mut s = StoreState::new(queue);
    let mut uploaders: HashMap<GraphId, (String, Timestamp)> = HashMap::new();
    let mut jobs: Vec<PendingJob> = Vec::new();
    let mut next_job = 1;

    for (no, raw) in lines {
        if raw.is_empty() {
            continue;
        }
        let (tag, rest) = raw.split_once(' ').unwrap_or((raw, ""));
        let n = arity(tag).ok_or_else(|| StoreError::Dump { line: no, message: format!("unknown record {tag:?}") })?;
        let mut l = Line { no, fields: rest.splitn(n, ' ') };
        match tag {
            "N" => {
                next_job = l.parse("job id")?;
                l.done()?;
            }
            "K" => {
                let slug = l.next("slug")?.to_string();
                let description = l.text("description")?;
                if s.classes.contains_key(&slug) {
                    return Err(l.err(format!("duplicate class {slug:?}")));
                }
                s.classes.insert(slug.clone(), GraphClass { slug, description, ..GraphClass::default() });
            }
            "L" => {
                let slug = l.next("slug")?;
                let g6 = l.next("graph6")?;
                let order = graph6_decode(g6).map_err(|e| l.err(e.to_string()))?.order();
                let class = s.classes.get_mut(slug).ok_or_else(|| l.err(format!("class {slug:?} not declared")))?;
                class.lists.entry(order).or_default().push(g6.to_string());
            }
            "G" => {
                let id: GraphId = l.parse("graph id")?;
                let canonical = l.next("canonical form")?.to_string();
                let graph6 = l.next("graph6")?.to_string();
                let name = match l.fields.next() {
                    Some(f) => Some(unescape(f).ok_or_else(|| l.err("bad escape in name"))?),
                    None => None,
                };
                let graph = graph6_decode(&graph6).map_err(|e| l.err(e.to_string()))?;
                graph6_decode(&canonical).map_err(|e| l.err(e.to_string()))?;
                if id == 0 || id <= s.max_id() {
                    return Err(l.err("graph ids must be positive and increasing"));
                }
                if s.by_canonical.contains_key(&canonical) {
                    return Err(l.err("duplicate canonical form"));
                }
                s.insert_graph(StoredGraph {
                    id,
                    canonical,
                    graph6,
                    name,
                    uploader: String::new(),
                    uploaded_at: Timestamp(0),
                    graph,
                });
            }
            "U" => {
                let id = known(&s, &mut l)?;
                let author = l.next("uploader")?.to_string();
                let at = l.parse("timestamp")?;
                l.done()?;
                uploaders.insert(id, (author, at));
            }
            "I" => {
                let id = known(&s, &mut l)?;
                let inv = l.invariant()?;
                let status = l.next("status")?;
                let value = l.fields.next();
                let status = match (status, value) {
                    ("pending", None) => JobStatus::Pending,
                    ("computing", None) => JobStatus::Computing,
                    ("timeout", None) => JobStatus::Timeout,
                    ("done", Some(v)) => JobStatus::Done(inv.parse_value(v).map_err(|e| l.err(e.to_string()))?),
                    _ => return Err(l.err(format!("bad status {status:?}"))),
                };
                if let JobStatus::Done(v) = &status {
                    s.index.record_done(id, inv, v);
                }
                s.mlfq.restore_record(id, inv, status);
            }
            "C" => {
                let id = known(&s, &mut l)?;
                let author = l.next("author")?.to_string();
                let at = l.parse("timestamp")?;
                let text = l.text("text")?;
                s.comments.entry(id).or_default().push(Comment { author, at, text });
            }
            "E" => {
                let id = known(&s, &mut l)?;
                let seq: u32 = l.parse("sequence number")?;
                let text = l.next("coordinates")?;
                let coords = parse_coords(&l, text)?;
                let author = l.next("author")?.to_string();
                let created_at = l.parse("timestamp")?;
                l.done()?;
                let list = s.embeddings.entry(id).or_default();
                if seq as usize != list.len() + 1 {
                    return Err(l.err("embedding sequence numbers must be consecutive"));
                }
                if coords.len() != s.graphs[&id].graph.order() {
                    return Err(l.err("coordinate count does not match the graph order"));
                }
                list.push(Embedding { seq, coords, author, created_at });
            }
            "M" => {
                let id = known(&s, &mut l)?;
                let invariant = l.invariant()?;
                let author = l.next("author")?.to_string();
                l.done()?;
                s.insert_mark(id, InterestingMark { invariant, author });
            }
            "J" => {
                let job = l.parse("job id")?;
                let graph = known(&s, &mut l)?;
                let invariant = l.invariant()?;
                let level = l.parse("level")?;
                let attempts = l.parse("attempts")?;
                let enqueued_ms = l.parse("enqueue time")?;
                l.done()?;
                jobs.push(PendingJob { id: job, graph, invariant, level, attempts, enqueued_ms });
            }
            _ => unreachable!("arity covers every tag"),
        }
    }

    for (id, (author, at)) in uploaders {
        if let Some(g) = s.graphs.get_mut(&id) {
            g.uploader = author;
            g.uploaded_at = at;
        }
    }
    for j in jobs {
        let computing = matches!(s.mlfq.record(j.graph, j.invariant), Some(JobStatus::Computing));
        s.mlfq.restore_job(j.id, j.graph, j.invariant, j.level, j.attempts, j.enqueued_ms, computing);
    }
    s.mlfq.reserve_job_ids(next_job);
    Ok(s)
}

fn known(s: &StoreState, l: &mut Line<'_>) -> Result<GraphId, StoreError> {
    let id: GraphId = l.parse("graph id")?;
    if s.graphs.contains_key(&id) {
        Ok(id)
    } else {
        Err(l.err(format!("graph {id} not declared")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        for t in ["plain", "back\\slash", "two\nlines\r\n", "tab\there", "\\n literal", ""] {
            assert_eq!(unescape(&escape(t)).as_deref(), Some(t));
            assert!(!escape(t).contains('\n'));
        }
        assert_eq!(unescape("bad\\q"), None);
        assert_eq!(unescape("trailing\\"), None);
    }

    #[test]
    fn empty_store_is_header_only() {
        let s = StoreState::new(QueueConfig::default());
        assert_eq!(write(&s), "HOGDUMP 1\n");
    }

    #[test]
    fn newer_schema_is_rejected() {
        let err = parse("HOGDUMP 2\n", QueueConfig::default()).err().unwrap();
        assert!(matches!(err, StoreError::SchemaVersionMismatch { found } if found == "2"));
        assert!(matches!(parse("hello\n", QueueConfig::default()), Err(StoreError::Dump { line: 1, .. })));
    }
}

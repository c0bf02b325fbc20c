//! Append-only JSON-lines log of mutations since the last snapshot.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::invariants::InvariantId;
use crate::scheduler::{GraphId, JobId};

use super::StoreError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub(crate) enum Op {
    Upload { id: GraphId, graph6: String, canonical: String, name: Option<String>, author: String, at_ms: u64 },
    Comment { graph: GraphId, author: String, at_ms: u64, text: String },
    Embedding { graph: GraphId, author: String, at_ms: u64, coords: Vec<[f64; 2]> },
    Mark { graph: GraphId, invariant: InvariantId, author: String },
    ImportClass { slug: String, description: Option<String>, lines: Vec<String> },
    Dispatch { job: JobId },
    Complete { job: JobId, value: String },
    Expire { job: JobId, at_ms: u64 },
    Release { job: JobId },
    Recover { at_ms: u64 },
}

pub(crate) struct Journal {
    file: File,
    durable: bool,
}

impl Journal {
    pub fn create(path: &Path, durable: bool) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Journal { file, durable })
    }

    pub fn append(&mut self, op: &Op) -> std::io::Result<()> {
        let mut line = serde_json::to_string(op).map_err(std::io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        if self.durable {
            self.file.sync_data()?;
        }
        Ok(())
    }

    pub fn truncate(&mut self) -> std::io::Result<()> {
        self.file.set_len(0)?;
        self.file.sync_all()
    }
}

/// Reads the journal with 1-based line numbers. A torn final line, as left
/// by a crash mid-write, is dropped.
pub(crate) fn read(path: &Path) -> Result<Vec<(usize, Op)>, StoreError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let lines: Vec<String> = BufReader::new(File::open(path)?).lines().collect::<Result<_, _>>()?;
    let last = lines.len();
    let mut out = Vec::with_capacity(last);
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Op>(line) {
            Ok(op) => out.push((i + 1, op)),
            Err(_) if i + 1 == last => {
                tracing::warn!(line = i + 1, "dropping torn journal tail");
            }
            Err(e) => return Err(StoreError::Journal { line: i + 1, message: e.to_string() }),
        }
    }
    Ok(out)
}

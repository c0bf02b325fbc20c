//! Bit-exact graph interchange formats.
//!
//! * graph6: printable ASCII, one graph per line (`.g6`).
//! * multicode: binary, records concatenated back to back (`.mc`).
//! * adjacency matrix: `n` lines of `n` space-separated `0`/`1`.
//! * adjacency list: one `i: j k ...` line per vertex, 0-based.
//!
//! Text streams holding several matrices or lists separate consecutive
//! graphs by one empty line.

mod adjacency;
mod graph6;
mod multicode;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

pub use adjacency::{adjacency_list_parse, adjacency_list_print, adjacency_matrix_parse, adjacency_matrix_print};
pub use graph6::{graph6_decode, graph6_decode_with_limit, graph6_encode, GRAPH6_HEADER};
pub use multicode::{multicode_decode, multicode_decode_prefix, multicode_encode, MULTICODE_MAX_ORDER};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    BadCharacter { offset: usize, byte: u8 },
    #[error("bit vector truncated: expected {expected} bytes, found {found}")]
    TruncatedBitVector { expected: usize, found: usize },
    #[error("padding bits of the final byte at offset {offset} are not zero")]
    PaddingNotZero { offset: usize },
    #[error("unexpected trailing data at offset {offset}")]
    TrailingData { offset: usize },
    #[error("order {order} exceeds the format maximum of {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("empty input at offset {offset}")]
    EmptyInput { offset: usize },
    #[error("unexpected end of stream at offset {offset}")]
    UnexpectedEndOfStream { offset: usize },
    #[error("neighbor {neighbor} of vertex {vertex} at offset {offset} is out of range")]
    NeighborOutOfRange { offset: usize, vertex: usize, neighbor: usize },
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("non-zero diagonal entry in row {0}")]
    NonZeroDiagonal(usize),
    #[error("row {0} has the wrong number of entries")]
    RaggedRow(usize),
    #[error("invalid token {token:?} in row {row}, column {column}")]
    BadToken { row: usize, column: usize, token: String },
    #[error("line {line} must start with the label \"{line}:\"")]
    BadLabel { line: usize },
    #[error("record {index}: {source}")]
    Record {
        index: usize,
        #[source]
        source: Box<CodecError>,
    },
    #[error("unknown format {0:?}")]
    UnknownFormat(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl CodecError {
    /// Wraps the error with the zero-based record index it occurred in.
    pub fn in_record(self, index: usize) -> CodecError {
        CodecError::Record {
            index,
            source: Box::new(self),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[serde(alias = "g6")]
    Graph6,
    #[serde(alias = "mc")]
    Multicode,
    #[serde(rename = "adjmat", alias = "matrix")]
    AdjacencyMatrix,
    #[serde(rename = "adjlist", alias = "list")]
    AdjacencyList,
}

impl Format {
    pub const ALL: [Format; 4] = [
        Format::Graph6,
        Format::Multicode,
        Format::AdjacencyMatrix,
        Format::AdjacencyList,
    ];

    /// Short name used in URLs and on the command line.
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Graph6 => "g6",
            Format::Multicode => "mc",
            Format::AdjacencyMatrix => "adjmat",
            Format::AdjacencyList => "adjlist",
        }
    }

    pub fn content_type(self) -> &'static str {
        match self {
            Format::Multicode => "application/octet-stream",
            _ => "text/plain; charset=utf-8",
        }
    }

    pub fn is_binary(self) -> bool {
        self == Format::Multicode
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "g6" | "graph6" => Ok(Format::Graph6),
            "mc" | "multicode" => Ok(Format::Multicode),
            "adjmat" | "matrix" | "adjacency-matrix" => Ok(Format::AdjacencyMatrix),
            "adjlist" | "list" | "adjacency-list" => Ok(Format::AdjacencyList),
            _ => Err(CodecError::UnknownFormat(s.to_string())),
        }
    }
}

/// A graph payload tagged with its format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedGraph {
    pub format: Format,
    pub payload: Vec<u8>,
}

impl EncodedGraph {
    pub fn new(format: Format, payload: impl Into<Vec<u8>>) -> Self {
        EncodedGraph {
            format,
            payload: payload.into(),
        }
    }

    pub fn graph6(text: &str) -> Self {
        Self::new(Format::Graph6, text.as_bytes())
    }

    pub fn encode(format: Format, g: &Graph) -> Result<Self, CodecError> {
        Ok(Self::new(format, encode(format, g)?))
    }

    /// Decodes exactly one graph.
    pub fn decode(&self) -> Result<Graph, CodecError> {
        decode(self.format, &self.payload)
    }
}

/// Encodes a single graph without any record separator.
pub fn encode(format: Format, g: &Graph) -> Result<Vec<u8>, CodecError> {
    Ok(match format {
        Format::Graph6 => graph6_encode(g)?.into_bytes(),
        Format::Multicode => multicode_encode(g)?,
        Format::AdjacencyMatrix => adjacency_matrix_print(g).into_bytes(),
        Format::AdjacencyList => adjacency_list_print(g).into_bytes(),
    })
}

/// Decodes a payload holding exactly one graph.
pub fn decode(format: Format, payload: &[u8]) -> Result<Graph, CodecError> {
    match format {
        Format::Graph6 => graph6_decode(&text(payload)?),
        Format::Multicode => multicode_decode(payload),
        Format::AdjacencyMatrix => adjacency_matrix_parse(&text(payload)?),
        Format::AdjacencyList => adjacency_list_parse(&text(payload)?),
    }
}

/// Appends one stream record for `g`: a graph6 line, a multicode record, or
/// a matrix/list block followed by an empty separator line.
pub fn write_record(format: Format, g: &Graph, out: &mut Vec<u8>) -> Result<(), CodecError> {
    out.extend_from_slice(&encode(format, g)?);
    match format {
        Format::Graph6 | Format::AdjacencyMatrix | Format::AdjacencyList => out.push(b'\n'),
        Format::Multicode => {}
    }
    Ok(())
}

/// Decodes every graph of a stream in the given format.
pub fn decode_stream(format: Format, payload: &[u8]) -> Result<Vec<Graph>, CodecError> {
    match format {
        Format::Multicode => {
            let mut out = Vec::new();
            let mut offset = 0;
            while offset < payload.len() {
                let (g, used) = multicode_decode_prefix(&payload[offset..])
                    .map_err(|e| shift_offset(e, offset).in_record(out.len()))?;
                offset += used;
                out.push(g);
            }
            Ok(out)
        }
        Format::Graph6 => text(payload)?
            .lines()
            .map(|l| l.trim_end_matches('\r'))
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, l)| graph6_decode(l).map_err(|e| e.in_record(i)))
            .collect(),
        Format::AdjacencyMatrix | Format::AdjacencyList => {
            let body = text(payload)?;
            let mut blocks = Vec::new();
            let mut current = String::new();
            for line in body.lines() {
                if line.trim().is_empty() {
                    if !current.is_empty() {
                        blocks.push(std::mem::take(&mut current));
                    }
                } else {
                    current.push_str(line);
                    current.push('\n');
                }
            }
            if !current.is_empty() {
                blocks.push(current);
            }
            blocks
                .iter()
                .enumerate()
                .map(|(i, b)| decode(format, b.as_bytes()).map_err(|e| e.in_record(i)))
                .collect()
        }
    }
}

fn text(payload: &[u8]) -> Result<String, CodecError> {
    match std::str::from_utf8(payload) {
        Ok(s) => Ok(s.to_string()),
        Err(e) => {
            let offset = e.valid_up_to();
            Err(CodecError::BadCharacter {
                offset,
                byte: payload[offset],
            })
        }
    }
}

fn shift_offset(e: CodecError, by: usize) -> CodecError {
    match e {
        CodecError::UnexpectedEndOfStream { offset } => CodecError::UnexpectedEndOfStream { offset: offset + by },
        CodecError::EmptyInput { offset } => CodecError::EmptyInput { offset: offset + by },
        CodecError::NeighborOutOfRange {
            offset,
            vertex,
            neighbor,
        } => CodecError::NeighborOutOfRange {
            offset: offset + by,
            vertex,
            neighbor,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_names_round_trip() {
        for f in Format::ALL {
            assert_eq!(f.as_str().parse::<Format>().unwrap(), f);
        }
        assert!(matches!("png".parse::<Format>(), Err(CodecError::UnknownFormat(_))));
    }

    #[test]
    fn streams_of_each_format() {
        let graphs = vec![
            Graph::complete(3).unwrap(),
            Graph::empty(1).unwrap(),
            Graph::cycle(5).unwrap(),
        ];
        for f in Format::ALL {
            let mut buf = Vec::new();
            for g in &graphs {
                write_record(f, g, &mut buf).unwrap();
            }
            assert_eq!(decode_stream(f, &buf).unwrap(), graphs, "{f}");
        }
    }

    #[test]
    fn stream_errors_carry_record_index() {
        let err = decode_stream(Format::Graph6, b"Bw\nB!\n").unwrap_err();
        assert_eq!(
            err,
            CodecError::BadCharacter { offset: 1, byte: b'!' }.in_record(1)
        );
        let err = decode_stream(Format::Multicode, &[3, 2, 3, 0, 3, 0, 2, 2]).unwrap_err();
        assert_eq!(
            err,
            CodecError::UnexpectedEndOfStream { offset: 8 }.in_record(1)
        );
    }
}

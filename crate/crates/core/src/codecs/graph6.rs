use crate::graph::{Graph, DEFAULT_MAX_ORDER};

use super::CodecError;

/// Optional header allowed at the start of a graph6 line.
pub const GRAPH6_HEADER: &str = ">>graph6<<";

/// Largest order expressible with the one- or four-byte size prefix.
const FOUR_BYTE_MAX: usize = 258_047;

const BIAS: u8 = 63;

/// Encodes `g` as a graph6 string without a trailing newline.
pub fn graph6_encode(g: &Graph) -> Result<String, CodecError> {
    let n = g.order();
    if n > FOUR_BYTE_MAX {
        return Err(CodecError::OrderTooLarge {
            order: n,
            max: FOUR_BYTE_MAX,
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(4 + bits.div_ceil(6));
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else {
        out.push(126);
        out.extend([(n >> 12) & 63, (n >> 6) & 63, n & 63].map(|x| x as u8 + BIAS));
    }

    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = g.neighbors(j);
        let mut next = 0;
        for i in 0..j {
            // Neighbors are sorted; walk them alongside i.
            while next < row.len() && row[next] < i {
                next += 1;
            }
            let bit = next < row.len() && row[next] == i;
            acc = (acc << 1) | bit as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + BIAS);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + BIAS);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

/// Decodes one graph6 string, accepting an optional `>>graph6<<` header and
/// a trailing line terminator.
pub fn graph6_decode(s: &str) -> Result<Graph, CodecError> {
    graph6_decode_with_limit(s, DEFAULT_MAX_ORDER)
}

pub fn graph6_decode_with_limit(s: &str, max_order: usize) -> Result<Graph, CodecError> {
    let start = if s.starts_with(GRAPH6_HEADER) {
        GRAPH6_HEADER.len()
    } else {
        0
    };
    let body = s.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = &body[start.min(body.len())..];
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(CodecError::BadCharacter {
                offset: start + i,
                byte: b,
            });
        }
    }
    let value = |i: usize| (bytes[i] - BIAS) as usize;
    let (n, prefix) = match bytes {
        [] => return Err(CodecError::EmptyInput { offset: start }),
        [126, 126, ..] => {
            if bytes.len() < 8 {
                return Err(CodecError::UnexpectedEndOfStream {
                    offset: start + bytes.len(),
                });
            }
            ((2..8).fold(0usize, |acc, i| (acc << 6) | value(i)), 8)
        }
        [126, ..] => {
            if bytes.len() < 4 {
                return Err(CodecError::UnexpectedEndOfStream {
                    offset: start + bytes.len(),
                });
            }
            ((1..4).fold(0usize, |acc, i| (acc << 6) | value(i)), 4)
        }
        [first, ..] => ((first - BIAS) as usize, 1),
    };
    if n > max_order {
        return Err(CodecError::OrderTooLarge { order: n, max: max_order });
    }
    if n == 0 {
        return Err(CodecError::EmptyInput { offset: start });
    }
    let bits = n * (n - 1) / 2;
    let needed = bits.div_ceil(6);
    let data = &bytes[prefix..];
    if data.len() < needed {
        return Err(CodecError::TruncatedBitVector {
            expected: needed,
            found: data.len(),
        });
    }
    if data.len() > needed {
        return Err(CodecError::TrailingData {
            offset: start + prefix + needed,
        });
    }
    let pad = needed * 6 - bits;
    if pad > 0 {
        let last = data[needed - 1] - BIAS;
        if last & ((1u8 << pad) - 1) != 0 {
            return Err(CodecError::PaddingNotZero {
                offset: start + prefix + needed - 1,
            });
        }
    }

    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - BIAS;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges_with_limit(n, edges, max_order)?)
}

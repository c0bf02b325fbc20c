use crate::graph::Graph;

use super::CodecError;

/// Orders above this do not fit the single-byte vertex labels.
pub const MULTICODE_MAX_ORDER: usize = 255;

/// Layout: byte `n`, then for each 1-based vertex `i` in `1..n` the
/// ascending 1-based neighbors `j > i`, closed by a `0` byte.
pub fn multicode_encode(g: &Graph) -> Result<Vec<u8>, CodecError> {
    let n = g.order();
    if n > MULTICODE_MAX_ORDER {
        return Err(CodecError::OrderTooLarge {
            order: n,
            max: MULTICODE_MAX_ORDER,
        });
    }
    let mut out = Vec::with_capacity(1 + n + g.size());
    out.push(n as u8);
    for v in 0..n.saturating_sub(1) {
        out.extend(g.neighbors(v).iter().filter(|&&w| w > v).map(|&w| (w + 1) as u8));
        out.push(0);
    }
    Ok(out)
}

/// Decodes exactly one multicode record.
pub fn multicode_decode(bytes: &[u8]) -> Result<Graph, CodecError> {
    let (g, used) = multicode_decode_prefix(bytes)?;
    if used != bytes.len() {
        return Err(CodecError::TrailingData { offset: used });
    }
    Ok(g)
}

/// Decodes the record at the start of `bytes`, returning the graph and the
/// number of bytes consumed.
pub fn multicode_decode_prefix(bytes: &[u8]) -> Result<(Graph, usize), CodecError> {
    let n = match bytes.first() {
        None => return Err(CodecError::UnexpectedEndOfStream { offset: 0 }),
        Some(0) => return Err(CodecError::EmptyInput { offset: 0 }),
        Some(&b) => b as usize,
    };
    let mut edges = Vec::new();
    let mut pos = 1;
    for vertex in 1..n {
        loop {
            let Some(&b) = bytes.get(pos) else {
                return Err(CodecError::UnexpectedEndOfStream { offset: pos });
            };
            pos += 1;
            if b == 0 {
                break;
            }
            let neighbor = b as usize;
            if neighbor <= vertex || neighbor > n {
                return Err(CodecError::NeighborOutOfRange {
                    offset: pos - 1,
                    vertex,
                    neighbor,
                });
            }
            edges.push((vertex - 1, neighbor - 1));
        }
    }
    Ok((Graph::from_edges(n, edges)?, pos))
}

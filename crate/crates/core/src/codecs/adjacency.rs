use crate::graph::{Graph, GraphError};

use super::CodecError;

/// `n` lines of `n` space-separated `0`/`1` entries, each line LF-terminated.
pub fn adjacency_matrix_print(g: &Graph) -> String {
    let n = g.order();
    let mut out = String::with_capacity(n * 2 * n);
    for u in 0..n {
        let mut row = vec!["0"; n];
        for &v in g.neighbors(u) {
            row[v] = "1";
        }
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn adjacency_matrix_parse(text: &str) -> Result<Graph, CodecError> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    let n = rows.len();
    if n == 0 {
        return Err(CodecError::EmptyInput { offset: 0 });
    }
    let mut bits = vec![vec![false; n]; n];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CodecError::RaggedRow(i));
        }
        for (j, tok) in row.iter().enumerate() {
            bits[i][j] = match *tok {
                "0" => false,
                "1" => true,
                other => {
                    return Err(CodecError::BadToken {
                        row: i,
                        column: j,
                        token: other.to_string(),
                    })
                }
            };
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if bits[i][i] {
            return Err(CodecError::NonZeroDiagonal(i));
        }
        for j in i + 1..n {
            if bits[i][j] != bits[j][i] {
                return Err(CodecError::NotSymmetric(i, j));
            }
            if bits[i][j] {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

/// One `i: j k ...` line per vertex; isolated vertices print as `i:`.
pub fn adjacency_list_print(g: &Graph) -> String {
    let mut out = String::new();
    for u in 0..g.order() {
        out.push_str(&u.to_string());
        out.push(':');
        for v in g.neighbors(u) {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn adjacency_list_parse(text: &str) -> Result<Graph, CodecError> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    let n = lines.len();
    if n == 0 {
        return Err(CodecError::EmptyInput { offset: 0 });
    }
    let mut lists = Vec::with_capacity(n);
    for (i, line) in lines.iter().enumerate() {
        let (label, rest) = line.split_once(':').ok_or(CodecError::BadLabel { line: i })?;
        if label.trim().parse::<usize>().ok() != Some(i) {
            return Err(CodecError::BadLabel { line: i });
        }
        let mut list = Vec::new();
        for (column, tok) in rest.split_whitespace().enumerate() {
            let j: usize = tok.parse().map_err(|_| CodecError::BadToken {
                row: i,
                column,
                token: tok.to_string(),
            })?;
            if j >= n {
                return Err(GraphError::VertexOutOfRange { vertex: j, order: n }.into());
            }
            if j == i {
                return Err(CodecError::NonZeroDiagonal(i));
            }
            list.push(j);
        }
        list.sort_unstable();
        list.dedup();
        lists.push(list);
    }
    let mut edges = Vec::new();
    for (i, list) in lists.iter().enumerate() {
        for &j in list {
            if lists[j].binary_search(&i).is_err() {
                return Err(CodecError::NotSymmetric(i.min(j), i.max(j)));
            }
            if i < j {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?)
}

//! Simple undirected graphs on the dense vertex set `0..n`.
//!
//! A [`Graph`] is immutable once built. Every other module consumes graphs
//! through the accessors here; edits produce a new value.

use std::fmt;

use thiserror::Error;

use crate::bitset::VertexSet;

/// Largest order accepted by default: the biggest order whose graph6 size
/// prefix fits the four-byte form we emit.
pub const DEFAULT_MAX_ORDER: usize = 1023;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("order {order} exceeds the maximum of {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("a graph needs at least one vertex")]
    Empty,
    #[error("permutation has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("not a permutation: value {0} is repeated or out of range")]
    NotAPermutation(usize),
}

/// A simple undirected graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Graph {
    /// Builds a graph from a vertex count and edge list, collapsing
    /// duplicate pairs. Uses [`DEFAULT_MAX_ORDER`] as the size cap.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges_with_limit(n, edges, DEFAULT_MAX_ORDER)
    }

    pub fn from_edges_with_limit<I>(n: usize, edges: I, max: usize) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > max {
            return Err(GraphError::OrderTooLarge { order: n, max });
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut total = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            total += list.len();
        }
        Ok(Graph {
            adj,
            edges: total / 2,
        })
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Self::from_edges(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Graph, GraphError> {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Graph, GraphError> {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Graph, GraphError> {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    #[inline]
    pub fn size(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Degrees in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Adjacency as one vertex set per vertex.
    pub fn adjacency_sets(&self) -> Vec<VertexSet> {
        let n = self.order();
        self.adj
            .iter()
            .map(|list| VertexSet::with_vertices(n, list.iter().copied()))
            .collect()
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let mut adj = Vec::with_capacity(n);
        let mut total = 0;
        for u in 0..n {
            let list: Vec<usize> = (0..n)
                .filter(|&v| v != u && self.adj[u].binary_search(&v).is_err())
                .collect();
            total += list.len();
            adj.push(list);
        }
        Graph {
            adj,
            edges: total / 2,
        }
    }

    /// Induced subgraph on `vertices`, relabeled `0..k` in ascending order of
    /// the original labels.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph, GraphError> {
        let n = self.order();
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, order: n });
        }
        let mut index = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges()
            .filter(|&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|(u, v)| (index[u], index[v]));
        Graph::from_edges_with_limit(keep.len(), edges, usize::MAX)
    }

    /// The graph with vertex `v` removed; remaining vertices keep their
    /// relative order. Returns `None` for the single-vertex graph.
    pub fn delete_vertex(&self, v: usize) -> Option<Graph> {
        if self.order() <= 1 {
            return None;
        }
        let rest: Vec<usize> = (0..self.order()).filter(|&u| u != v).collect();
        self.induced_subgraph(&rest).ok()
    }

    /// Applies `p`: edge `(u, v)` becomes `(p(u), p(v))`.
    pub fn relabel(&self, p: &VertexPermutation) -> Result<Graph, GraphError> {
        if p.len() != self.order() {
            return Err(GraphError::LengthMismatch {
                expected: self.order(),
                found: p.len(),
            });
        }
        let mut adj = vec![Vec::new(); self.order()];
        for (u, list) in self.adj.iter().enumerate() {
            let target = &mut adj[p.apply(u)];
            target.extend(list.iter().map(|&v| p.apply(v)));
            target.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: self.edges,
        })
    }

    /// Connected components, each sorted ascending, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.order())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// A bijection on `0..n`, stored as the image of each vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VertexPermutation(Vec<usize>);

impl VertexPermutation {
    pub fn identity(n: usize) -> Self {
        VertexPermutation((0..n).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Self, GraphError> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if x >= images.len() || seen[x] {
                return Err(GraphError::NotAPermutation(x));
            }
            seen[x] = true;
        }
        Ok(VertexPermutation(images))
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        VertexPermutation(inv)
    }

    /// `self` after `first`: `v -> self(first(v))`.
    pub fn after(&self, first: &VertexPermutation) -> Self {
        VertexPermutation(first.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    #[test]
    fn build_examples() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(k3.size(), 3);
        let k1 = Graph::from_edges(1, []).unwrap();
        assert_eq!((k1.order(), k1.size()), (1, 0));
        let dup = Graph::from_edges(3, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(dup.size(), 1);
        assert_eq!(dup.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn build_errors() {
        assert_eq!(Graph::from_edges(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, order: 3 })
        );
        assert_eq!(
            Graph::empty(1024),
            Err(GraphError::OrderTooLarge { order: 1024, max: 1023 })
        );
        assert_eq!(Graph::empty(0), Err(GraphError::Empty));
    }

    #[test]
    fn relabel_examples() {
        let k3 = Graph::complete(3).unwrap();
        let p = VertexPermutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(k3.relabel(&p).unwrap(), k3);

        let p3 = Graph::path(3).unwrap();
        let rev = VertexPermutation::new(vec![2, 1, 0]).unwrap();
        assert_eq!(p3.relabel(&rev).unwrap(), p3);

        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let swap = VertexPermutation::new(vec![1, 0, 2, 3]).unwrap();
        let moved = star.relabel(&swap).unwrap();
        assert_eq!(moved.degree(1), 3);
        assert_eq!(moved.degree_sequence(), star.degree_sequence());

        assert_eq!(
            k3.relabel(&VertexPermutation::identity(2)),
            Err(GraphError::LengthMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn complement_and_induced() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(k3.complement(), Graph::empty(3).unwrap());
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.induced_subgraph(&[0, 1, 2]).unwrap(), Graph::path(3).unwrap());
        assert!(matches!(
            c5.induced_subgraph(&[0, 7]),
            Err(GraphError::VertexOutOfRange { vertex: 7, .. })
        ));
        assert_eq!(petersen().degree_sequence(), vec![3; 10]);
        assert_eq!(petersen().complement().size(), 45 - 15);
    }

    #[test]
    fn permutation_rules() {
        assert_eq!(
            VertexPermutation::new(vec![0, 0]),
            Err(GraphError::NotAPermutation(0))
        );
        let p = VertexPermutation::new(vec![3, 0, 2, 1]).unwrap();
        assert!(p.inverse().after(&p).is_identity());
        assert!(p.after(&p.inverse()).is_identity());
    }
}

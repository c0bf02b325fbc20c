use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::is_biconnected;

/// All degrees even and the edges form one connected piece.
pub fn is_eulerian(g: &Graph) -> bool {
    if (0..g.order()).any(|v| g.degree(v) % 2 == 1) {
        return false;
    }
    g.components().iter().filter(|c| c.len() > 1).count() <= 1
}

struct CycleSearch<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    start: usize,
}

impl CycleSearch<'_> {
    /// Rejects states where some unvisited vertex cannot get two cycle
    /// neighbors or the unvisited vertices are not reachable from `end`.
    fn hopeless(&self, end: usize, unvisited: &VertexSet) -> bool {
        let mut usable = unvisited.clone();
        usable.insert(end);
        usable.insert(self.start);
        for u in unvisited.iter() {
            if self.adj[u].intersection_len(&usable) < 2 {
                return true;
            }
        }
        let mut seen = VertexSet::new(unvisited.capacity());
        let mut stack = vec![end];
        let mut count = 0;
        while let Some(u) = stack.pop() {
            for w in self.adj[u].intersection(unvisited).iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count < unvisited.len()
    }

    fn extend(&mut self, end: usize, unvisited: &mut VertexSet) -> Result<bool, Interrupted> {
        self.budget.check()?;
        if unvisited.is_empty() {
            return Ok(self.adj[end].contains(self.start));
        }
        if self.hopeless(end, unvisited) {
            return Ok(false);
        }
        let mut next: Vec<(usize, usize)> = self.adj[end]
            .intersection(unvisited)
            .iter()
            .map(|w| (self.adj[w].intersection_len(unvisited), w))
            .collect();
        next.sort_unstable();
        for (_, w) in next {
            unvisited.remove(w);
            let found = self.extend(w, unvisited)?;
            unvisited.insert(w);
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

pub fn is_hamiltonian(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    let n = g.order();
    if !is_biconnected(g) {
        return Ok(false);
    }
    let start = (0..n).min_by_key(|&v| g.degree(v)).expect("graph has vertices");
    let mut search = CycleSearch { adj: g.adjacency_sets(), budget, start };
    let mut unvisited = VertexSet::full(n);
    unvisited.remove(start);
    search.extend(start, &mut unvisited)
}

/// Hamiltonian path test via a Hamiltonian cycle in the join with K1.
pub fn is_traceable(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    let n = g.order();
    if n <= 2 {
        return Ok(n == 1 || g.size() == 1);
    }
    if !g.is_connected() || (0..n).filter(|&v| g.degree(v) == 1).count() > 2 {
        return Ok(false);
    }
    let edges = g.edges().chain((0..n).map(|v| (v, n)));
    let joined = Graph::from_edges_with_limit(n + 1, edges, usize::MAX).expect("join edges are valid");
    is_hamiltonian(&joined, budget)
}

pub fn is_hypohamiltonian(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    if g.order() < 4 || is_hamiltonian(g, budget)? {
        return Ok(false);
    }
    for v in 0..g.order() {
        let h = g.delete_vertex(v).expect("order is at least 4");
        if !is_hamiltonian(&h, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Non-traceable connected graph whose vertex-deleted subgraphs are all
/// traceable.
pub fn is_hypotraceable(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    if g.order() < 3 || !g.is_connected() || is_traceable(g, budget)? {
        return Ok(false);
    }
    for v in 0..g.order() {
        let h = g.delete_vertex(v).expect("order is at least 3");
        if !is_traceable(&h, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::blocks;

/// Shortest cycle length, 0 for forests.
pub fn girth(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        budget.check()?;
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        'bfs: while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                    if best == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == 3 {
            break;
        }
    }
    Ok(if best == usize::MAX { 0 } else { best })
}

pub fn triangles(g: &Graph) -> u64 {
    let adj = g.adjacency_sets();
    let mut count = 0u64;
    for (u, v) in g.edges() {
        count += g.neighbors(v).iter().filter(|&&w| w > v && adj[u].contains(w)).count() as u64;
    }
    count
}

fn block_graphs(g: &Graph) -> Vec<Graph> {
    blocks(g)
        .into_iter()
        .filter(|b| b.len() >= 3)
        .map(|b| g.induced_subgraph(&b).expect("block vertices are in range"))
        .collect()
}

/// Vertices reachable from `from` through `allowed`, counting `from` only
/// if it is itself allowed.
fn reach_count(adj: &[VertexSet], from: usize, allowed: &VertexSet) -> usize {
    let mut seen = VertexSet::new(allowed.capacity());
    let mut stack = vec![from];
    let mut count = 0;
    while let Some(u) = stack.pop() {
        for w in adj[u].intersection(allowed).iter() {
            if !seen.contains(w) {
                seen.insert(w);
                count += 1;
                stack.push(w);
            }
        }
    }
    count
}

struct LongestCycle<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    best: usize,
    n: usize,
}

impl LongestCycle<'_> {
    // `free` holds unused vertices greater than the start vertex.
    fn extend(&mut self, start: usize, last: usize, len: usize, free: &mut VertexSet) -> Result<(), Interrupted> {
        self.budget.check()?;
        if len >= 3 && self.adj[last].contains(start) {
            self.best = self.best.max(len);
            if self.best == self.n {
                return Ok(());
            }
        }
        if len + reach_count(&self.adj, last, free) <= self.best {
            return Ok(());
        }
        let candidates = self.adj[last].intersection(free);
        for w in candidates.iter() {
            free.remove(w);
            self.extend(start, w, len + 1, free)?;
            free.insert(w);
            if self.best == self.n {
                break;
            }
        }
        Ok(())
    }
}

/// Longest cycle length, 0 for forests. Each block is searched separately.
pub fn circumference(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let mut best = 0;
    for b in block_graphs(g) {
        let n = b.order();
        if n <= best {
            continue;
        }
        let mut search = LongestCycle { adj: b.adjacency_sets(), budget, best: 0, n };
        for s in 0..n {
            if n - s <= search.best {
                break;
            }
            let mut free = VertexSet::new(n);
            for v in s + 1..n {
                free.insert(v);
            }
            search.extend(s, s, 1, &mut free)?;
            if search.best == n {
                break;
            }
        }
        best = best.max(search.best);
    }
    Ok(best)
}

struct InducedCycle<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    best: usize,
}

impl InducedCycle<'_> {
    // `open` holds vertices that may still join the path: greater than the
    // start, unused, and not adjacent to any interior path vertex.
    fn extend(&mut self, start: usize, last: usize, len: usize, open: &VertexSet) -> Result<(), Interrupted> {
        self.budget.check()?;
        if len + reach_count(&self.adj, last, open) <= self.best {
            return Ok(());
        }
        let candidates = self.adj[last].intersection(open);
        for w in candidates.iter() {
            if len >= 2 && self.adj[w].contains(start) {
                self.best = self.best.max(len + 1);
                continue;
            }
            let mut next = open.clone();
            if len >= 2 {
                // `last` becomes interior
                next.difference_with(&self.adj[last]);
            }
            next.remove(w);
            self.extend(start, w, len + 1, &next)?;
        }
        Ok(())
    }
}

/// Longest induced cycle, 0 for forests. Induced cycles lie inside blocks.
pub fn longest_induced_cycle(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let mut best = 0;
    for b in block_graphs(g) {
        let n = b.order();
        if n <= best {
            continue;
        }
        let mut search = InducedCycle { adj: b.adjacency_sets(), budget, best };
        for s in 0..n {
            if n - s <= search.best {
                break;
            }
            let mut open = VertexSet::new(n);
            for v in s + 1..n {
                open.insert(v);
            }
            search.extend(s, s, 1, &open)?;
        }
        best = best.max(search.best);
    }
    Ok(best)
}

struct InducedPath<'a> {
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    best: usize,
}

impl InducedPath<'_> {
    fn extend(&mut self, last: usize, vertices: usize, open: &VertexSet) -> Result<(), Interrupted> {
        self.budget.check()?;
        self.best = self.best.max(vertices - 1);
        if vertices - 1 + reach_count(&self.adj, last, open) <= self.best {
            return Ok(());
        }
        let candidates = self.adj[last].intersection(open);
        // once extended, `last` is no longer the end and blocks its neighbors
        let next = open.difference(&self.adj[last]);
        for w in candidates.iter() {
            self.extend(w, vertices + 1, &next)?;
        }
        Ok(())
    }
}

/// Longest induced path measured in edges.
pub fn longest_induced_path(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let mut search = InducedPath { adj: g.adjacency_sets(), budget, best: 0 };
    for comp in g.components() {
        if comp.len() <= search.best + 1 {
            continue;
        }
        for &s in &comp {
            let mut open = VertexSet::with_vertices(n, comp.iter().copied());
            open.remove(s);
            search.extend(s, 1, &open)?;
        }
    }
    Ok(search.best)
}

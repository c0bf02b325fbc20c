//! Exact treewidth by dynamic programming over eliminated vertex sets.
//!
//! For an eliminated set S and a next vertex v, the width contributed by v
//! is |Q(S, v)|: the vertices outside S ∪ {v} adjacent to v's component in
//! G[S ∪ {v}]. Treewidth is the minimum over elimination orders of the
//! largest such value. States whose width reaches the current upper bound
//! are dropped.

use std::collections::HashMap;

use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::blocks;

fn q_size(adj: &[VertexSet], s: &VertexSet, v: usize) -> usize {
    let mut comp = VertexSet::new(s.capacity());
    comp.insert(v);
    let mut frontier = vec![v];
    let mut reach = adj[v].clone();
    while let Some(u) = frontier.pop() {
        for w in adj[u].intersection(s).iter() {
            if !comp.contains(w) {
                comp.insert(w);
                reach.union_with(&adj[w]);
                frontier.push(w);
            }
        }
    }
    reach.difference_with(s);
    reach.remove(v);
    reach.len()
}

/// Width of the greedy min-fill elimination order.
fn min_fill_width(adj: &[VertexSet]) -> usize {
    let n = adj.len();
    let mut adj = adj.to_vec();
    let mut alive = VertexSet::full(n);
    let mut width = 0;
    for _ in 0..n {
        let v = alive
            .iter()
            .min_by_key(|&v| {
                let nb: Vec<usize> = adj[v].iter().collect();
                let mut fill = 0;
                for (i, &a) in nb.iter().enumerate() {
                    fill += nb[i + 1..].iter().filter(|&&b| !adj[a].contains(b)).count();
                }
                (fill, nb.len())
            })
            .expect("vertices remain");
        let nb: Vec<usize> = adj[v].iter().collect();
        width = width.max(nb.len());
        for &a in &nb {
            for &b in &nb {
                if a != b {
                    adj[a].insert(b);
                }
            }
            adj[a].remove(v);
        }
        alive.remove(v);
        adj[v].clear();
    }
    width
}

/// Minor-min-width: contract a minimum-degree vertex into its neighbor of
/// least degree; the largest minimum degree seen bounds treewidth below.
fn contraction_lower_bound(adj: &[VertexSet]) -> usize {
    let n = adj.len();
    let mut adj = adj.to_vec();
    let mut alive = VertexSet::full(n);
    let mut bound = 0;
    while alive.len() > 1 {
        let v = alive.iter().min_by_key(|&v| adj[v].len()).expect("vertices remain");
        let d = adj[v].len();
        bound = bound.max(d);
        if let Some(u) = adj[v].iter().min_by_key(|&w| adj[w].len()) {
            let nb = adj[v].clone();
            for w in nb.iter() {
                adj[w].remove(v);
                if w != u {
                    adj[w].insert(u);
                    adj[u].insert(w);
                }
            }
        }
        adj[v].clear();
        alive.remove(v);
    }
    bound
}

fn connected_treewidth(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    let adj = g.adjacency_sets();
    let lower = contraction_lower_bound(&adj);
    let mut upper = min_fill_width(&adj);
    if lower >= upper {
        return Ok(upper);
    }
    let mut layer: HashMap<VertexSet, usize> = HashMap::from([(VertexSet::new(n), 0)]);
    for size in 0..n {
        let mut next: HashMap<VertexSet, usize> = HashMap::new();
        for (s, &r) in &layer {
            budget.check()?;
            for v in 0..n {
                if s.contains(v) {
                    continue;
                }
                let w = r.max(q_size(&adj, s, v));
                if w >= upper {
                    continue;
                }
                // eliminating the rest in any order costs at most n − |S| − 2
                let rest = n.saturating_sub(size + 2);
                if rest <= w {
                    upper = w;
                    continue;
                }
                let mut s2 = s.clone();
                s2.insert(v);
                let e = next.entry(s2).or_insert(usize::MAX);
                *e = (*e).min(w);
            }
        }
        next.retain(|_, w| *w < upper);
        if next.is_empty() || upper <= lower {
            break;
        }
        layer = next;
    }
    Ok(upper)
}

/// Treewidth is the maximum over blocks; edgeless graphs have width 0.
pub fn treewidth(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let mut best = 0;
    for b in blocks(g) {
        if b.len() == 2 {
            best = best.max(1);
            continue;
        }
        if b.len() <= best + 1 {
            continue;
        }
        let sub = g.induced_subgraph(&b).expect("block vertices are in range");
        best = best.max(connected_treewidth(&sub, budget)?);
    }
    Ok(best)
}

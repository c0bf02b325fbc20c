use std::collections::VecDeque;

use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::flow::FlowNetwork;

/// BFS distances from `s`; unreachable vertices get `usize::MAX`.
pub fn distances(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.order()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Eccentricities, or `None` when the graph is disconnected.
pub fn eccentricities(g: &Graph, budget: &Budget) -> Result<Option<Vec<usize>>, Interrupted> {
    let mut ecc = Vec::with_capacity(g.order());
    for v in 0..g.order() {
        budget.check()?;
        let e = distances(g, v).into_iter().max().unwrap_or(0);
        if e == usize::MAX {
            return Ok(None);
        }
        ecc.push(e);
    }
    Ok(Some(ecc))
}

/// Diameter, −1 when disconnected.
pub fn diameter(g: &Graph, budget: &Budget) -> Result<i64, Interrupted> {
    Ok(match eccentricities(g, budget)? {
        Some(e) => e.into_iter().max().unwrap_or(0) as i64,
        None => -1,
    })
}

/// Radius, −1 when disconnected.
pub fn radius(g: &Graph, budget: &Budget) -> Result<i64, Interrupted> {
    Ok(match eccentricities(g, budget)? {
        Some(e) => e.into_iter().min().unwrap_or(0) as i64,
        None => -1,
    })
}

pub fn is_complete(g: &Graph) -> bool {
    let n = g.order();
    g.size() == n * (n.saturating_sub(1)) / 2
}

/// Vertex connectivity by Even's algorithm on the vertex-split network.
pub fn vertex_connectivity(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    if !g.is_connected() {
        return Ok(0);
    }
    if is_complete(g) {
        return Ok(n - 1);
    }
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        net.add_arc(2 * v, 2 * v + 1, 1);
    }
    for (u, v) in g.edges() {
        net.add_arc(2 * u + 1, 2 * v, n as u32);
        net.add_arc(2 * v + 1, 2 * u, n as u32);
    }
    let mut best = g.min_degree();
    let mut i = 0;
    while i <= best && i < n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            budget.check()?;
            net.reset();
            best = best.min(net.max_flow(2 * i + 1, 2 * j, best));
        }
        i += 1;
    }
    Ok(best)
}

/// Edge connectivity as the minimum unit flow from vertex 0.
pub fn edge_connectivity(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let n = g.order();
    if n <= 1 || !g.is_connected() {
        return Ok(0);
    }
    let mut net = FlowNetwork::new(n);
    for (u, v) in g.edges() {
        net.add_edge(u, v);
    }
    let mut best = g.min_degree();
    for t in 1..n {
        budget.check()?;
        net.reset();
        best = best.min(net.max_flow(0, t, best));
    }
    Ok(best)
}

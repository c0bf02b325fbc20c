use std::collections::VecDeque;

use crate::graph::Graph;

pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.order();
    let mut side = vec![u8::MAX; n];
    for root in 0..n {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// No induced K1,3: no vertex has three pairwise non-adjacent neighbors.
pub fn is_claw_free(g: &Graph) -> bool {
    let adj = g.adjacency_sets();
    for v in 0..g.order() {
        let nb = g.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for (j, &b) in nb.iter().enumerate().skip(i + 1) {
                if adj[a].contains(b) {
                    continue;
                }
                if nb[j + 1..].iter().any(|&c| !adj[a].contains(c) && !adj[b].contains(c)) {
                    return false;
                }
            }
        }
    }
    true
}

//! Planarity by the Demoucron–Malgrange–Pertuiset face-embedding algorithm,
//! run on each block.

use std::collections::VecDeque;

use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::blocks;

pub fn is_planar(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    for b in blocks(g) {
        if b.len() < 5 {
            continue;
        }
        let sub = g.induced_subgraph(&b).expect("block vertices are in range");
        if !block_is_planar(&sub, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Fragment {
    attachments: VertexSet,
    /// interior vertices; empty for a single chord edge
    interior: Vec<usize>,
    chord: Option<(usize, usize)>,
}

fn find_cycle(g: &Graph) -> Vec<usize> {
    // DFS from 0 until a back edge closes a cycle
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx == g.degree(v) {
            stack.pop();
            continue;
        }
        let w = g.neighbors(v)[*idx];
        *idx += 1;
        if depth[w] == usize::MAX {
            depth[w] = depth[v] + 1;
            parent[w] = v;
            stack.push((w, 0));
        } else if w != parent[v] && depth[w] < depth[v] {
            let mut cycle = vec![v];
            let mut x = v;
            while x != w {
                x = parent[x];
                cycle.push(x);
            }
            return cycle;
        }
    }
    unreachable!("a block with three or more vertices contains a cycle")
}

/// DMP on a biconnected graph.
pub(crate) fn block_is_planar(g: &Graph, budget: &Budget) -> Result<bool, Interrupted> {
    let n = g.order();
    let m = g.size();
    if m > 3 * n - 6 {
        return Ok(false);
    }
    // a subdivided K5 or K3,3 needs m − n ≥ 3
    if m <= n + 2 {
        return Ok(true);
    }
    let adj = g.adjacency_sets();
    let cycle = find_cycle(g);
    let mut in_h = VertexSet::with_vertices(n, cycle.iter().copied());
    let mut h_adj = vec![VertexSet::new(n); n];
    let mut h_edges = 0;
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        h_adj[a].insert(b);
        h_adj[b].insert(a);
        h_edges += 1;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle];
    let mut face_sets: Vec<VertexSet> = faces.iter().map(|f| VertexSet::with_vertices(n, f.iter().copied())).collect();

    while h_edges < m {
        budget.check()?;
        let fragments = fragments(g, &adj, &in_h, &h_adj);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> =
                (0..faces.len()).filter(|&f| frag.attachments.is_subset(&face_sets[f])).collect();
            match admissible.len() {
                0 => return Ok(false),
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = choice.expect("some edge lies outside the embedded subgraph");
        let path = fragment_path(g, &in_h, &fragments[fi]);
        for w in path.windows(2) {
            h_adj[w[0]].insert(w[1]);
            h_adj[w[1]].insert(w[0]);
            h_edges += 1;
        }
        for &v in &path {
            in_h.insert(v);
        }
        let (f1, f2) = split_face(&faces[face], &path);
        face_sets[face] = VertexSet::with_vertices(n, f1.iter().copied());
        faces[face] = f1;
        face_sets.push(VertexSet::with_vertices(n, f2.iter().copied()));
        faces.push(f2);
    }
    Ok(true)
}

fn fragments(g: &Graph, adj: &[VertexSet], in_h: &VertexSet, h_adj: &[VertexSet]) -> Vec<Fragment> {
    let n = g.order();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if in_h.contains(u) && in_h.contains(v) && !h_adj[u].contains(v) {
            out.push(Fragment {
                attachments: VertexSet::with_vertices(n, [u, v]),
                interior: Vec::new(),
                chord: Some((u, v)),
            });
        }
    }
    let mut seen = in_h.clone();
    for root in 0..n {
        if seen.contains(root) {
            continue;
        }
        seen.insert(root);
        let mut interior = vec![root];
        let mut attachments = VertexSet::new(n);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            attachments.union_with(&adj[u].intersection(in_h));
            for &w in g.neighbors(u) {
                if !seen.contains(w) {
                    seen.insert(w);
                    interior.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.push(Fragment { attachments, interior, chord: None });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(g: &Graph, in_h: &VertexSet, frag: &Fragment) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let n = g.order();
    let inside = VertexSet::with_vertices(n, frag.interior.iter().copied());
    let a = frag.attachments.first().expect("fragments have attachments");
    let c = *g.neighbors(a).iter().find(|&&w| inside.contains(w)).expect("attachment touches the fragment");
    let mut parent = vec![usize::MAX; n];
    parent[c] = c;
    let mut queue = VecDeque::from([c]);
    while let Some(x) = queue.pop_front() {
        if let Some(&b) = g.neighbors(x).iter().find(|&&b| b != a && in_h.contains(b)) {
            let mut path = vec![b, x];
            let mut y = x;
            while parent[y] != y {
                y = parent[y];
                path.push(y);
            }
            path.push(a);
            path.reverse();
            return path;
        }
        for &w in g.neighbors(x) {
            if inside.contains(w) && parent[w] == usize::MAX {
                parent[w] = x;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragments of a biconnected graph have two attachments")
}

fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let len = face.len();
    let a = path[0];
    let b = *path.last().expect("path is non-empty");
    let ia = face.iter().position(|&x| x == a).expect("attachment on face");
    let ib = face.iter().position(|&x| x == b).expect("attachment on face");
    let interior = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut i = ia;
    loop {
        f1.push(face[i]);
        if i == ib {
            break;
        }
        i = (i + 1) % len;
    }
    f1.extend(interior.iter().rev());
    let mut f2 = Vec::new();
    let mut i = ib;
    loop {
        f2.push(face[i]);
        if i == ia {
            break;
        }
        i = (i + 1) % len;
    }
    f2.extend(interior.iter());
    (f1, f2)
}

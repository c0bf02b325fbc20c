//! Maximum matching by Edmonds' blossom algorithm.

use std::collections::VecDeque;

use crate::graph::Graph;

const NIL: usize = usize::MAX;

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.order();
        Blossom {
            g,
            mate: vec![NIL; n],
            parent: vec![NIL; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NIL {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Searches an augmenting path from `root`; returns its free end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NIL);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NIL && self.parent[self.mate[to]] != NIL) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NIL {
                    self.parent[to] = v;
                    if self.mate[to] == NIL {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }
}

pub fn matching_number(g: &Graph) -> usize {
    let n = g.order();
    let mut b = Blossom::new(g);
    for v in 0..n {
        if b.mate[v] == NIL {
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| b.mate[w] == NIL) {
                b.mate[v] = w;
                b.mate[w] = v;
            }
        }
    }
    for v in 0..n {
        if b.mate[v] != NIL {
            continue;
        }
        if let Some(mut u) = b.find_path(v) {
            while u != NIL {
                let pv = b.parent[u];
                let ppv = b.mate[pv];
                b.mate[u] = pv;
                b.mate[pv] = u;
                u = ppv;
            }
        }
    }
    b.mate.iter().filter(|&&m| m != NIL).count() / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_values() {
        let p = crate::codecs::graph6_decode("IheA@GUAo").unwrap();
        assert_eq!(matching_number(&p), 5);
        assert_eq!(matching_number(&Graph::complete(4).unwrap()), 2);
        assert_eq!(matching_number(&Graph::cycle(5).unwrap()), 2);
        assert_eq!(matching_number(&Graph::empty(1).unwrap()), 0);
        // a blossom forces augmentation through an odd cycle
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (2, 5)]).unwrap();
        assert_eq!(matching_number(&g), 3);
    }
}

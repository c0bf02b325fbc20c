//! Unit-capacity maximum flow by BFS augmentation.

use std::collections::VecDeque;

pub struct FlowNetwork {
    head: Vec<usize>,
    next: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<u32>,
    original: Vec<u32>,
}

const NONE: usize = usize::MAX;

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            head: vec![NONE; nodes],
            next: Vec::new(),
            to: Vec::new(),
            cap: Vec::new(),
            original: Vec::new(),
        }
    }

    fn push_arc(&mut self, u: usize, v: usize, c: u32) {
        self.to.push(v);
        self.cap.push(c);
        self.original.push(c);
        self.next.push(self.head[u]);
        self.head[u] = self.to.len() - 1;
    }

    /// Arc u→v with capacity `c` and its residual twin.
    pub fn add_arc(&mut self, u: usize, v: usize, c: u32) {
        self.push_arc(u, v, c);
        self.push_arc(v, u, 0);
    }

    /// Undirected edge usable once in either direction.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.push_arc(u, v, 1);
        self.push_arc(v, u, 1);
    }

    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.original);
    }

    /// Maximum s–t flow, stopping early once it reaches `limit`.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let n = self.head.len();
        let mut flow = 0;
        let mut via = vec![NONE; n];
        while flow < limit {
            via.iter_mut().for_each(|x| *x = NONE);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            'bfs: while let Some(u) = queue.pop_front() {
                let mut a = self.head[u];
                while a != NONE {
                    let v = self.to[a];
                    if self.cap[a] > 0 && v != s && via[v] == NONE {
                        via[v] = a;
                        if v == t {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                    a = self.next[a];
                }
            }
            if !reached {
                break;
            }
            let mut v = t;
            while v != s {
                let a = via[v];
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                v = self.to[a ^ 1];
            }
            flow += 1;
        }
        flow
    }
}

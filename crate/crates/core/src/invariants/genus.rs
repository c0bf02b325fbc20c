//! Orientable genus by exhaustive search over rotation systems.
//!
//! Genus is additive over blocks, so each nonplanar block is searched on its
//! own. For a block and a candidate genus g the search asks whether some
//! rotation system traces at least `m − n + 2 − 2g` faces. Faces are traced
//! one at a time and rotation entries are fixed lazily as a face walk needs
//! them; face lengths are bounded below by the girth, which prunes hopeless
//! partial systems.

use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::blocks;
use super::cycles::girth;
use super::planarity::block_is_planar;

const NONE: usize = usize::MAX;

struct Rotations<'a> {
    offset: Vec<usize>,
    head: Vec<usize>,
    rev: Vec<usize>,
    degree: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    used: Vec<bool>,
    darts: usize,
    girth: usize,
    target: usize,
    budget: &'a Budget,
}

impl<'a> Rotations<'a> {
    fn new(g: &Graph, girth: usize, budget: &'a Budget) -> Self {
        let n = g.order();
        let mut offset = vec![0; n + 1];
        for v in 0..n {
            offset[v + 1] = offset[v] + g.degree(v);
        }
        let darts = offset[n];
        let mut tail = vec![0; darts];
        let mut head = vec![0; darts];
        for v in 0..n {
            for (i, &w) in g.neighbors(v).iter().enumerate() {
                tail[offset[v] + i] = v;
                head[offset[v] + i] = w;
            }
        }
        let rev = (0..darts)
            .map(|d| {
                let (v, w) = (tail[d], head[d]);
                offset[w] + g.neighbors(w).iter().position(|&x| x == v).expect("edge is symmetric")
            })
            .collect();
        let mut r = Rotations {
            degree: (0..n).map(|v| g.degree(v)).collect(),
            offset,
            head,
            rev,
            next: vec![NONE; darts],
            prev: vec![NONE; darts],
            used: vec![false; darts],
            darts,
            girth,
            target: 0,
            budget,
        };
        // degree-two vertices have a single rotation
        for v in 0..n {
            if r.degree[v] == 2 {
                let (a, b) = (r.offset[v], r.offset[v] + 1);
                r.link(a, b);
                r.link(b, a);
            }
        }
        r
    }

    fn link(&mut self, from: usize, to: usize) {
        self.next[from] = to;
        self.prev[to] = from;
    }

    fn unlink(&mut self, from: usize) {
        self.prev[self.next[from]] = NONE;
        self.next[from] = NONE;
    }

    /// Linking `from → to` must not close a cycle shorter than the degree.
    fn closes_early(&self, v: usize, from: usize, to: usize) -> bool {
        let mut cur = to;
        let mut count = 1;
        while self.next[cur] != NONE {
            cur = self.next[cur];
            count += 1;
        }
        cur == from && count < self.degree[v]
    }

    fn start_face(&mut self, faces: usize, used: usize) -> Result<bool, Interrupted> {
        if used == self.darts {
            return Ok(faces >= self.target);
        }
        if faces + (self.darts - used) / self.girth < self.target {
            return Ok(false);
        }
        let d = self.used.iter().position(|&u| !u).expect("an unused dart remains");
        self.used[d] = true;
        let found = self.walk(d, d, 1, faces, used + 1);
        self.used[d] = false;
        found
    }

    fn walk(&mut self, start: usize, cur: usize, len: usize, faces: usize, used: usize) -> Result<bool, Interrupted> {
        self.budget.check()?;
        let remaining = self.darts - used;
        let need = self.girth.saturating_sub(len);
        if need > remaining || faces + 1 + (remaining - need) / self.girth < self.target {
            return Ok(false);
        }
        let r = self.rev[cur];
        let v = self.head[cur];
        if self.next[r] != NONE {
            let nd = self.next[r];
            if nd == start {
                return if len >= self.girth { self.start_face(faces + 1, used) } else { Ok(false) };
            }
            if self.used[nd] {
                return Ok(false);
            }
            self.used[nd] = true;
            let found = self.walk(start, nd, len + 1, faces, used + 1);
            self.used[nd] = false;
            return found;
        }
        let lo = self.offset[v];
        let hi = lo + self.degree[v];
        // try closing the face first
        let mut order: Vec<usize> = Vec::with_capacity(hi - lo);
        if (lo..hi).contains(&start) {
            order.push(start);
        }
        order.extend((lo..hi).filter(|&x| x != start));
        for x in order {
            if x == r || self.prev[x] != NONE || self.closes_early(v, r, x) {
                continue;
            }
            if x == start && len < self.girth {
                continue;
            }
            if x != start && self.used[x] {
                continue;
            }
            self.link(r, x);
            let found = if x == start {
                self.start_face(faces + 1, used)
            } else {
                self.used[x] = true;
                let f = self.walk(start, x, len + 1, faces, used + 1);
                self.used[x] = false;
                f
            };
            self.unlink(r);
            if found? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn has_embedding_with_faces(&mut self, target: usize) -> Result<bool, Interrupted> {
        self.target = target;
        self.start_face(0, 0)
    }
}

fn block_genus(b: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    if block_is_planar(b, budget)? {
        return Ok(0);
    }
    let n = b.order();
    let m = b.size();
    let gi = girth(b, budget)?;
    let max_faces = 2 * m / gi;
    // Euler: faces = m − n + 2 − 2g
    let euler = m + 2 - n;
    let mut g = euler.saturating_sub(max_faces).div_ceil(2).max(1);
    let mut search = Rotations::new(b, gi, budget);
    loop {
        let target = euler - 2 * g;
        if search.has_embedding_with_faces(target)? {
            return Ok(g);
        }
        g += 1;
    }
}

pub fn genus(g: &Graph, budget: &Budget) -> Result<usize, Interrupted> {
    let mut total = 0;
    for b in blocks(g) {
        if b.len() < 5 {
            continue;
        }
        let sub = g.induced_subgraph(&b).expect("block vertices are in range");
        total += block_genus(&sub, budget)?;
    }
    Ok(total)
}

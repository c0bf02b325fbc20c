//! Canonical labeling, isomorphism testing and automorphism groups.
//!
//! The search is the classic individualization-refinement scheme:
//!
//! 1. refine the unit partition to the coarsest equitable ordered partition;
//! 2. pick the first smallest non-singleton cell and branch on each of its
//!    vertices, individualizing it and refining again;
//! 3. every discrete partition (leaf) induces a relabeling of the graph; the
//!    canonical form is the lexicographically smallest graph6 bit string over
//!    all explored leaves.
//!
//! Two leaves carrying the same relabeled graph give an automorphism. Found
//! automorphisms prune the tree: children of a node that lie in one orbit of
//! the generators fixing the node's individualized vertices have isomorphic
//! subtrees, so only one of them is explored. Along the first path the size of
//! the orbit of the first child, under generators fixing the path prefix, is
//! the index of the next stabilizer in the chain, and their product is the
//! group order.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use crate::bitset::VertexSet;
use crate::budget::{Budget, Interrupted};
use crate::codecs::graph6_encode;
use crate::graph::{Graph, VertexPermutation};

/// Canonical graph6 string plus the labeling that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub graph6: String,
    /// Maps each original vertex to its canonical label.
    pub labeling: VertexPermutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismSummary {
    pub group_size: BigUint,
    /// Vertex orbits, each sorted, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
    pub generators: Vec<VertexPermutation>,
}

impl AutomorphismSummary {
    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }
}

/// Result of a single canonical search.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub form: CanonicalForm,
    pub automorphisms: AutomorphismSummary,
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    analyze(g).form
}

/// The canonical graph6 string, used as the deduplication key.
pub fn canonical_key(g: &Graph) -> String {
    canonical_form(g).graph6
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.order() != b.order() || a.size() != b.size() || a.degree_sequence() != b.degree_sequence() {
        return false;
    }
    canonical_key(a) == canonical_key(b)
}

pub fn automorphisms(g: &Graph) -> AutomorphismSummary {
    analyze(g).automorphisms
}

pub fn analyze(g: &Graph) -> Analysis {
    analyze_within(g, &Budget::unlimited()).expect("unlimited budget never trips")
}

pub fn analyze_within(g: &Graph, budget: &Budget) -> Result<Analysis, Interrupted> {
    let mut search = Search {
        g,
        adj: g.adjacency_sets(),
        budget,
        first: None,
        best: None,
        generators: Vec::new(),
        orbit_sizes: Vec::new(),
    };
    let mut root = Partition::unit(g.order());
    root.refine(g, 0);
    search.explore(root, &mut Vec::new(), true)?;

    let best = search.best.expect("search reaches at least one leaf");
    let n = g.order();
    let mut labeling = vec![0; n];
    for (i, &v) in best.lab.iter().enumerate() {
        labeling[v] = i;
    }
    let labeling = VertexPermutation::new(labeling).expect("leaf is a bijection");
    let canonical = g.relabel(&labeling).expect("length matches");
    let graph6 = graph6_encode(&canonical).expect("order within graph6 range");

    let group_size = search
        .orbit_sizes
        .iter()
        .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
    let orbits = orbit_partition(n, &search.generators, &[]);
    let generators = search
        .generators
        .into_iter()
        .map(|p| VertexPermutation::new(p).expect("automorphism is a bijection"))
        .collect();
    Ok(Analysis {
        form: CanonicalForm { graph6, labeling },
        automorphisms: AutomorphismSummary {
            group_size,
            orbits,
            generators,
        },
    })
}

struct Leaf {
    lab: Vec<usize>,
    code: Vec<u8>,
}

#[derive(PartialEq, Eq)]
enum Found {
    Nothing,
    /// A leaf equivalent to the first leaf was reached.
    FirstEquivalent,
}

struct Search<'a> {
    g: &'a Graph,
    adj: Vec<VertexSet>,
    budget: &'a Budget,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
    orbit_sizes: Vec<usize>,
}

impl Search<'_> {
    fn explore(&mut self, part: Partition, path: &mut Vec<usize>, on_first: bool) -> Result<Found, Interrupted> {
        self.budget.check()?;
        if part.is_discrete() {
            return Ok(self.leaf(part.lab, on_first));
        }
        let (s, e) = part.target_cell();
        let mut children = part.lab[s..e].to_vec();
        children.sort_unstable();

        let mut explored: Vec<usize> = Vec::new();
        for &w in &children {
            if !explored.is_empty() && self.pruned(w, &explored, path) {
                continue;
            }
            let mut child = part.clone();
            child.individualize(self.g, w);
            path.push(w);
            let on_first_child = on_first && explored.is_empty();
            let found = self.explore(child, path, on_first_child)?;
            path.pop();
            explored.push(w);
            if found == Found::FirstEquivalent && !on_first {
                return Ok(Found::FirstEquivalent);
            }
        }
        if on_first {
            let orbits = orbit_partition(self.g.order(), &self.generators, path);
            let size = orbits
                .iter()
                .find(|o| o.contains(&children[0]))
                .map_or(1, Vec::len);
            self.orbit_sizes.push(size);
        }
        Ok(Found::Nothing)
    }

    fn pruned(&self, w: usize, explored: &[usize], path: &[usize]) -> bool {
        let fixing: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|p| path.iter().all(|&v| p[v] == v))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.g.order());
        for p in fixing {
            for (v, &x) in p.iter().enumerate() {
                uf.union(v, x);
            }
        }
        let root = uf.find(w);
        explored.iter().any(|&u| uf.find(u) == root)
    }

    fn leaf(&mut self, lab: Vec<usize>, on_first: bool) -> Found {
        let code = leaf_code(&self.adj, &lab);
        if on_first {
            self.best = Some(Leaf {
                lab: lab.clone(),
                code: code.clone(),
            });
            self.first = Some(Leaf { lab, code });
            return Found::Nothing;
        }
        let first = self.first.as_ref().expect("first leaf precedes others");
        if code == first.code {
            let gamma = mapping(&first.lab, &lab);
            self.push_generator(gamma);
            return Found::FirstEquivalent;
        }
        let best = self.best.as_ref().expect("best set with first leaf");
        match code.cmp(&best.code) {
            std::cmp::Ordering::Less => self.best = Some(Leaf { lab, code }),
            std::cmp::Ordering::Equal => {
                let gamma = mapping(&best.lab, &lab);
                self.push_generator(gamma);
            }
            std::cmp::Ordering::Greater => {}
        }
        Found::Nothing
    }

    fn push_generator(&mut self, gamma: Vec<usize>) {
        if gamma.iter().enumerate().any(|(i, &x)| i != x) && !self.generators.contains(&gamma) {
            self.generators.push(gamma);
        }
    }
}

/// The permutation sending `from[i]` to `to[i]`.
fn mapping(from: &[usize], to: &[usize]) -> Vec<usize> {
    let mut gamma = vec![0; from.len()];
    for (&a, &b) in from.iter().zip(to) {
        gamma[a] = b;
    }
    gamma
}

/// Upper-triangle adjacency bits of the relabeled graph (vertex `lab[i]`
/// becomes `i`), packed into graph6 data bytes.
fn leaf_code(adj: &[VertexSet], lab: &[usize]) -> Vec<u8> {
    let n = lab.len();
    let mut out = Vec::with_capacity((n * n.saturating_sub(1) / 2).div_ceil(6));
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let row = &adj[lab[j]];
        for &u in &lab[..j] {
            acc = (acc << 1) | row.contains(u) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

/// Orbits of the group generated by those `generators` fixing every vertex
/// of `fixed`.
fn orbit_partition(n: usize, generators: &[Vec<usize>], fixed: &[usize]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(n);
    for p in generators.iter().filter(|p| fixed.iter().all(|&v| p[v] == v)) {
        for (v, &x) in p.iter().enumerate() {
            uf.union(v, x);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let r = uf.find(v);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(v);
    }
    groups
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Ordered partition of the vertex set. Cells are contiguous ranges of
/// `lab`; `start[p]` is the first position of the cell holding position `p`
/// and `end[s]` the exclusive end of the cell starting at `s`.
#[derive(Clone)]
struct Partition {
    lab: Vec<usize>,
    pos: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut end = vec![0; n];
        end[0] = n;
        Partition {
            lab: (0..n).collect(),
            pos: (0..n).collect(),
            start: vec![0; n],
            end,
            cells: 1,
        }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.lab.len()
    }

    /// First cell of minimum size among non-singleton cells.
    fn target_cell(&self) -> (usize, usize) {
        let n = self.lab.len();
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < n {
            let e = self.end[s];
            if e - s > 1 && best.is_none_or(|(bs, be)| e - s < be - bs) {
                best = Some((s, e));
            }
            s = e;
        }
        best.expect("partition is not discrete")
    }

    fn individualize(&mut self, g: &Graph, v: usize) {
        let p = self.pos[v];
        let s = self.start[p];
        let e = self.end[s];
        let other = self.lab[s];
        self.lab.swap(s, p);
        self.pos[other] = p;
        self.pos[v] = s;
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for q in s + 1..e {
            self.start[q] = s + 1;
        }
        self.cells += 1;
        self.refine(g, s);
    }

    /// Refines to the coarsest equitable partition finer than the current
    /// one, starting from the splitter cell at position `first`.
    fn refine(&mut self, g: &Graph, first: usize) {
        let n = self.lab.len();
        let mut queue = VecDeque::from([first]);
        let mut queued = vec![false; n];
        queued[first] = true;
        let mut count = vec![0usize; n];
        let mut touched = Vec::new();

        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if self.is_discrete() {
                break;
            }
            let splitter: Vec<usize> = self.lab[w..self.end[w]].to_vec();
            for &u in &splitter {
                for &x in g.neighbors(u) {
                    if count[x] == 0 {
                        touched.push(x);
                    }
                    count[x] += 1;
                }
            }
            let mut starts: Vec<usize> = touched.iter().map(|&x| self.start[self.pos[x]]).collect();
            starts.sort_unstable();
            starts.dedup();

            for s in starts {
                let e = self.end[s];
                if e - s == 1 {
                    continue;
                }
                let c0 = count[self.lab[s]];
                if self.lab[s..e].iter().all(|&v| count[v] == c0) {
                    continue;
                }
                let mut members: Vec<usize> = self.lab[s..e].to_vec();
                members.sort_by_key(|&v| count[v]);
                let mut fragments = Vec::new();
                let mut fs = s;
                for (i, &v) in members.iter().enumerate() {
                    let p = s + i;
                    self.lab[p] = v;
                    self.pos[v] = p;
                    if i > 0 && count[v] != count[members[i - 1]] {
                        fragments.push((fs, p));
                        fs = p;
                    }
                }
                fragments.push((fs, e));
                for &(a, b) in &fragments {
                    self.end[a] = b;
                    for q in a..b {
                        self.start[q] = a;
                    }
                }
                self.cells += fragments.len() - 1;

                if queued[s] {
                    for &(a, _) in &fragments[1..] {
                        queued[a] = true;
                        queue.push_back(a);
                    }
                } else {
                    let largest = fragments
                        .iter()
                        .enumerate()
                        .max_by(|(i, x), (j, y)| (x.1 - x.0).cmp(&(y.1 - y.0)).then(j.cmp(i)))
                        .map(|(i, _)| i)
                        .unwrap_or(0);
                    for (i, &(a, _)) in fragments.iter().enumerate() {
                        if i != largest {
                            queued[a] = true;
                            queue.push_back(a);
                        }
                    }
                }
            }
            for &x in &touched {
                count[x] = 0;
            }
            touched.clear();
        }
    }
}

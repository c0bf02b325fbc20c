//! Brute-force invariant oracles straight from the definitions. Exponential
//! by design; fine up to a dozen vertices.

use std::collections::HashMap;

use graphdb_core::canonical::canonical_key;
use graphdb_core::invariants::{InvariantId, InvariantValue};
use graphdb_core::Graph;
use num_bigint::BigInt;

/// Adjacency as bit rows.
#[derive(Clone)]
pub struct Adj {
    pub n: usize,
    pub rows: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

impl Adj {
    pub fn new(g: &Graph) -> Self {
        let n = g.order();
        assert!(n <= 32);
        let mut rows = vec![0u32; n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    rows[u] |= 1 << v;
                    rows[v] |= 1 << u;
                    edges.push((u, v));
                }
            }
        }
        Adj { n, rows, edges }
    }

    pub fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn adj(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    fn deg_in(&self, v: usize, mask: u32) -> u32 {
        (self.rows[v] & mask).count_ones()
    }

    /// Whether the subgraph induced by a non-empty mask is connected.
    pub fn connected_in(&self, mask: u32) -> bool {
        if mask == 0 {
            return true;
        }
        let mut seen = 1u32 << mask.trailing_zeros();
        loop {
            let mut grown = seen;
            for v in bits(seen) {
                grown |= self.rows[v] & mask;
            }
            if grown == seen {
                return seen == mask;
            }
            seen = grown;
        }
    }

    fn edges_in(&self, mask: u32) -> u32 {
        bits(mask).map(|v| self.deg_in(v, mask)).sum::<u32>() / 2
    }
}

pub fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

fn subsets(n: usize) -> impl Iterator<Item = u32> {
    0u32..(1u32 << n)
}

fn components(a: &Adj) -> usize {
    let mut parent: Vec<usize> = (0..a.n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut count = a.n;
    for &(u, v) in &a.edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru] = rv;
            count -= 1;
        }
    }
    count
}

fn acyclic(a: &Adj) -> bool {
    a.edges.len() + components(a) == a.n
}

fn bipartite(a: &Adj) -> bool {
    subsets(a.n).any(|side| a.edges.iter().all(|&(u, v)| (side >> u & 1) != (side >> v & 1)))
}

fn claw_free(a: &Adj) -> bool {
    for c in 0..a.n {
        let nb: Vec<usize> = bits(a.rows[c]).collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                for k in j + 1..nb.len() {
                    let (x, y, z) = (nb[i], nb[j], nb[k]);
                    if !a.adj(x, y) && !a.adj(x, z) && !a.adj(y, z) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn eulerian(a: &Adj) -> bool {
    let touched = bits(a.all()).filter(|&v| a.rows[v] != 0).fold(0u32, |m, v| m | 1 << v);
    bits(a.all()).all(|v| a.rows[v].count_ones() % 2 == 0) && a.connected_in(touched)
}

/// Simple-path search inside `mask`, from `start`'s path `path`.
fn extend_path(a: &Adj, mask: u32, used: u32, last: usize, first: usize, cycle: bool) -> bool {
    if used == mask {
        return !cycle || a.adj(last, first);
    }
    for v in bits(a.rows[last] & mask & !used) {
        if extend_path(a, mask, used | 1 << v, v, first, cycle) {
            return true;
        }
    }
    false
}

/// A cycle through every vertex of `mask`; needs at least three vertices.
pub fn ham_cycle_in(a: &Adj, mask: u32) -> bool {
    if mask.count_ones() < 3 {
        return false;
    }
    let s = mask.trailing_zeros() as usize;
    extend_path(a, mask, 1 << s, s, s, true)
}

pub fn ham_path_in(a: &Adj, mask: u32) -> bool {
    if mask.count_ones() <= 1 {
        return true;
    }
    bits(mask).any(|s| extend_path(a, mask, 1 << s, s, s, false))
}

fn hypohamiltonian(a: &Adj) -> bool {
    !ham_cycle_in(a, a.all()) && bits(a.all()).all(|v| ham_cycle_in(a, a.all() & !(1 << v)))
}

fn hypotraceable(a: &Adj) -> bool {
    a.connected_in(a.all())
        && !ham_path_in(a, a.all())
        && bits(a.all()).all(|v| ham_path_in(a, a.all() & !(1 << v)))
}

/// Planarity by Wagner's theorem: no K5 or K3,3 minor. Minors are explored
/// one deletion or contraction at a time, memoized per isomorphism class.
pub struct MinorOracle {
    memo: HashMap<String, bool>,
    k5: String,
    k33: String,
}

impl Default for MinorOracle {
    fn default() -> Self {
        let k5 = canonical_key(&Graph::complete(5).unwrap());
        let k33 = canonical_key(&Graph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap());
        MinorOracle { memo: HashMap::new(), k5, k33 }
    }
}

impl MinorOracle {
    pub fn planar(&mut self, g: &Graph) -> bool {
        !self.has_kuratowski_minor(g)
    }

    fn has_kuratowski_minor(&mut self, g: &Graph) -> bool {
        // both forbidden minors need five vertices and nine edges
        if g.order() < 5 || g.size() < 9 {
            return false;
        }
        let key = canonical_key(g);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let mut found = key == self.k5 || key == self.k33;
        let edges: Vec<(usize, usize)> = g.edges().collect();
        if !found {
            for v in 0..g.order() {
                let keep: Vec<usize> = (0..g.order()).filter(|&x| x != v).collect();
                if self.has_kuratowski_minor(&g.induced_subgraph(&keep).unwrap()) {
                    found = true;
                    break;
                }
            }
        }
        if !found {
            for i in 0..edges.len() {
                let del = Graph::from_edges(g.order(), edges.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e)).unwrap();
                if self.has_kuratowski_minor(&del) || self.has_kuratowski_minor(&contract(g, edges[i])) {
                    found = true;
                    break;
                }
            }
        }
        self.memo.insert(key, found);
        found
    }
}

/// Merges `v` into `u` and renumbers the remaining vertices.
fn contract(g: &Graph, (u, v): (usize, usize)) -> Graph {
    let map = |x: usize| {
        let x = if x == v { u } else { x };
        if x > v {
            x - 1
        } else {
            x
        }
    };
    let edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (map(a), map(b))).filter(|(a, b)| a != b).collect();
    let mut uniq: Vec<(usize, usize)> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    uniq.sort_unstable();
    uniq.dedup();
    Graph::from_edges(g.order() - 1, uniq).unwrap()
}

/// Orientable genus by trying every rotation system, with Euler's formula
/// applied per component. Only feasible when the product of (deg - 1)!
/// stays small.
pub fn genus_by_rotations(a: &Adj) -> usize {
    let m = a.edges.len();
    if m == 0 {
        return 0;
    }
    let isolated = (0..a.n).filter(|&v| a.rows[v] == 0).count();
    let n = a.n - isolated;
    let c = components(a) - isolated;
    let nbrs: Vec<Vec<usize>> = (0..a.n).map(|v| bits(a.rows[v]).collect()).collect();
    // rotation per vertex: nbrs[v][0] fixed first, the rest permuted
    let mut rot: Vec<Vec<usize>> = nbrs.clone();
    let mut best_faces = 0;
    fn faces(rot: &[Vec<usize>], m: usize) -> usize {
        let mut used: HashMap<(usize, usize), ()> = HashMap::with_capacity(2 * m);
        let mut f = 0;
        for u in 0..rot.len() {
            for &v in &rot[u] {
                if used.contains_key(&(u, v)) {
                    continue;
                }
                f += 1;
                let (mut x, mut y) = (u, v);
                while used.insert((x, y), ()).is_none() {
                    let r = &rot[y];
                    let i = r.iter().position(|&w| w == x).unwrap();
                    let z = r[(i + 1) % r.len()];
                    (x, y) = (y, z);
                }
            }
        }
        f
    }
    fn search(v: usize, rot: &mut Vec<Vec<usize>>, m: usize, best: &mut usize) {
        if v == rot.len() {
            *best = (*best).max(faces(rot, m));
            return;
        }
        if rot[v].len() <= 2 {
            search(v + 1, rot, m, best);
            return;
        }
        let mut tail: Vec<usize> = rot[v][1..].to_vec();
        tail.sort_unstable();
        loop {
            rot[v].truncate(1);
            rot[v].extend_from_slice(&tail);
            search(v + 1, rot, m, best);
            if !super::next_permutation(&mut tail) {
                break;
            }
        }
    }
    search(0, &mut rot, m, &mut best_faces);
    (2 * c + m - n - best_faces) / 2
}

fn distances(a: &Adj) -> Vec<Vec<usize>> {
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; a.n]; a.n];
    for v in 0..a.n {
        d[v][v] = 0;
    }
    for &(u, v) in &a.edges {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..a.n {
        for i in 0..a.n {
            for j in 0..a.n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn eccentricities(a: &Adj) -> Option<Vec<usize>> {
    let d = distances(a);
    let inf = usize::MAX / 4;
    (0..a.n).map(|v| {
        let e = *d[v].iter().max().unwrap();
        (e < inf).then_some(e)
    }).collect()
}

fn combinations(len: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..len {
            if len - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if go(i + 1, len, k, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, len, k, &mut Vec::new(), f)
}

fn edge_connectivity(a: &Adj) -> usize {
    if a.n <= 1 || !a.connected_in(a.all()) {
        return 0;
    }
    for k in 1..=a.edges.len() {
        let cut = combinations(a.edges.len(), k, &mut |drop| {
            let mut b = a.clone();
            for &i in drop {
                let (u, v) = a.edges[i];
                b.rows[u] &= !(1 << v);
                b.rows[v] &= !(1 << u);
            }
            !b.connected_in(b.all())
        });
        if cut {
            return k;
        }
    }
    unreachable!("removing every edge disconnects a graph with two vertices")
}

fn vertex_connectivity(a: &Adj) -> usize {
    if !a.connected_in(a.all()) {
        return 0;
    }
    if a.edges.len() == a.n * (a.n - 1) / 2 {
        return a.n - 1;
    }
    (1..a.n)
        .find(|&k| subsets(a.n).any(|s| s.count_ones() as usize == k && !a.connected_in(a.all() & !s)))
        .unwrap()
}

fn colorable(a: &Adj, k: usize, v: usize, colors: &mut Vec<usize>) -> bool {
    if v == a.n {
        return true;
    }
    for c in 0..k {
        if (0..v).all(|u| !a.adj(u, v) || colors[u] != c) {
            colors[v] = c;
            if colorable(a, k, v + 1, colors) {
                return true;
            }
        }
    }
    false
}

fn chromatic_number(a: &Adj) -> usize {
    (0..=a.n).find(|&k| colorable(a, k, 0, &mut vec![0; a.n])).unwrap()
}

fn edge_colorable(a: &Adj, k: usize, i: usize, colors: &mut Vec<usize>) -> bool {
    if i == a.edges.len() {
        return true;
    }
    let (u, v) = a.edges[i];
    for c in 0..k {
        let clash = (0..i).any(|j| {
            let (x, y) = a.edges[j];
            colors[j] == c && (x == u || x == v || y == u || y == v)
        });
        if !clash {
            colors[i] = c;
            if edge_colorable(a, k, i + 1, colors) {
                return true;
            }
        }
    }
    false
}

fn chromatic_index(a: &Adj) -> usize {
    (0..).find(|&k| edge_colorable(a, k, 0, &mut vec![0; a.edges.len()])).unwrap()
}

fn max_matching(a: &Adj, i: usize, used: u32) -> usize {
    if i == a.edges.len() {
        return 0;
    }
    let skip = max_matching(a, i + 1, used);
    let (u, v) = a.edges[i];
    if used >> u & 1 == 0 && used >> v & 1 == 0 {
        skip.max(1 + max_matching(a, i + 1, used | 1 << u | 1 << v))
    } else {
        skip
    }
}

fn spanning_trees(a: &Adj) -> u64 {
    if a.n <= 1 {
        return 1;
    }
    let mut count = 0u64;
    combinations(a.edges.len(), a.n - 1, &mut |pick| {
        let mut b = Adj { n: a.n, rows: vec![0; a.n], edges: Vec::new() };
        for &i in pick {
            let (u, v) = a.edges[i];
            b.rows[u] |= 1 << v;
            b.rows[v] |= 1 << u;
        }
        if b.connected_in(b.all()) {
            count += 1;
        }
        false
    });
    count
}

/// Width of the best elimination ordering, by exhaustive search with
/// branch-and-bound on the best width found so far.
fn treewidth(a: &Adj) -> usize {
    fn go(rows: &[u32], alive: u32, width: usize, best: &mut usize) {
        if width >= *best {
            return;
        }
        if alive.count_ones() as usize <= width + 1 {
            *best = width;
            return;
        }
        for v in bits(alive) {
            let nb = rows[v] & alive & !(1 << v);
            let w = width.max(nb.count_ones() as usize);
            if w >= *best {
                continue;
            }
            let mut next = rows.to_vec();
            for x in bits(nb) {
                next[x] |= nb & !(1 << x);
            }
            go(&next, alive & !(1 << v), w, best);
        }
    }
    if a.n == 0 {
        return 0;
    }
    let mut best = a.n - 1;
    go(&a.rows, a.all(), 0, &mut best);
    best
}

/// Every automorphism by extending partial maps vertex by vertex.
fn automorphisms(a: &Adj) -> Vec<Vec<usize>> {
    fn go(a: &Adj, v: usize, map: &mut Vec<usize>, used: u32, out: &mut Vec<Vec<usize>>) {
        if v == a.n {
            out.push(map.clone());
            return;
        }
        for w in 0..a.n {
            if used >> w & 1 == 1 || a.rows[v].count_ones() != a.rows[w].count_ones() {
                continue;
            }
            if (0..v).all(|u| a.adj(u, v) == a.adj(map[u], w)) {
                map[v] = w;
                go(a, v + 1, map, used | 1 << w, out);
            }
        }
    }
    let mut out = Vec::new();
    go(a, 0, &mut vec![0; a.n], 0, &mut out);
    out
}

fn orbit_count(a: &Adj, autos: &[Vec<usize>]) -> usize {
    let mut orbit = vec![usize::MAX; a.n];
    let mut count = 0;
    for v in 0..a.n {
        if orbit[v] == usize::MAX {
            for p in autos {
                orbit[p[v]] = count;
            }
            count += 1;
        }
    }
    count
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(mut m: Vec<Vec<f64>>) -> Vec<f64> {
    let n = m.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| m[i][j] * m[i][j]).sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn adjacency_matrix(a: &Adj) -> Vec<Vec<f64>> {
    (0..a.n).map(|u| (0..a.n).map(|v| if a.adj(u, v) { 1.0 } else { 0.0 }).collect()).collect()
}

fn laplacian(a: &Adj) -> Vec<Vec<f64>> {
    (0..a.n)
        .map(|u| {
            (0..a.n)
                .map(|v| if u == v { a.rows[u].count_ones() as f64 } else if a.adj(u, v) { -1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

fn is_induced_cycle(a: &Adj, mask: u32) -> bool {
    mask.count_ones() >= 3 && a.connected_in(mask) && bits(mask).all(|v| a.deg_in(v, mask) == 2)
}

fn is_induced_path(a: &Adj, mask: u32) -> bool {
    mask != 0 && a.connected_in(mask) && a.edges_in(mask) == mask.count_ones() - 1 && bits(mask).all(|v| a.deg_in(v, mask) <= 2)
}

fn int(v: usize) -> InvariantValue {
    InvariantValue::Integer(BigInt::from(v))
}

/// Oracle value, or `None` when no oracle is feasible for this graph.
/// Genus and planarity are only covered up to seven vertices (every such
/// graph embeds in the torus, and two non-planar components need ten
/// vertices), or by rotation search for sparse graphs.
pub fn value(id: InvariantId, g: &Graph, minors: &mut MinorOracle) -> Option<InvariantValue> {
    use InvariantId::*;
    let a = Adj::new(g);
    let n = a.n;
    let m = a.edges.len();
    let all = a.all();
    let rotation_space: f64 = (0..n).map(|v| (1..a.rows[v].count_ones().max(1) as u64).product::<u64>() as f64).product();
    let b = InvariantValue::Bool;
    let real = InvariantValue::real;
    Some(match id {
        Acyclic => b(acyclic(&a)),
        Bipartite => b(bipartite(&a)),
        ClawFree => b(claw_free(&a)),
        Connected => b(a.connected_in(all)),
        Eulerian => b(eulerian(&a)),
        Hamiltonian => b(ham_cycle_in(&a, all)),
        Hypohamiltonian => b(hypohamiltonian(&a)),
        Hypotraceable => b(hypotraceable(&a)),
        Planar => {
            if n <= 7 {
                b(minors.planar(g))
            } else if rotation_space <= 1e6 {
                b(genus_by_rotations(&a) == 0)
            } else {
                return None;
            }
        }
        Regular => b(bits(all).map(|v| a.rows[v].count_ones()).min() == bits(all).map(|v| a.rows[v].count_ones()).max()),
        Traceable => b(ham_path_in(&a, all)),
        AlgebraicConnectivity => real(if n < 2 { 0.0 } else { jacobi_eigenvalues(laplacian(&a))[1] }),
        AverageDegree => real(2.0 * m as f64 / n as f64),
        ChromaticIndex => int(chromatic_index(&a)),
        ChromaticNumber => int(chromatic_number(&a)),
        Circumference => int(subsets(n).filter(|&s| ham_cycle_in(&a, s)).map(|s| s.count_ones() as usize).max().unwrap_or(0)),
        CliqueNumber => int(subsets(n).filter(|&s| a.edges_in(s) as usize * 2 == (s.count_ones() * s.count_ones().saturating_sub(1)) as usize).map(|s| s.count_ones() as usize).max().unwrap()),
        Density => real(if n < 2 { 0.0 } else { 2.0 * m as f64 / (n * (n - 1)) as f64 }),
        Diameter => InvariantValue::int(eccentricities(&a).map_or(-1, |e| *e.iter().max().unwrap() as i64)),
        DominationNumber => int(subsets(n)
            .filter(|&s| bits(all).all(|v| s >> v & 1 == 1 || a.rows[v] & s != 0))
            .map(|s| s.count_ones() as usize)
            .min()
            .unwrap()),
        EdgeConnectivity => int(edge_connectivity(&a)),
        Genus => {
            if n <= 7 {
                int(if minors.planar(g) { 0 } else { 1 })
            } else if rotation_space <= 1e6 {
                int(genus_by_rotations(&a))
            } else {
                return None;
            }
        }
        Girth => int(subsets(n).filter(|&s| ham_cycle_in(&a, s)).map(|s| s.count_ones() as usize).min().unwrap_or(0)),
        GroupSize => int(automorphisms(&a).len()),
        IndependenceNumber => int(subsets(n).filter(|&s| a.edges_in(s) == 0).map(|s| s.count_ones() as usize).max().unwrap()),
        Index => real(*jacobi_eigenvalues(adjacency_matrix(&a)).last().unwrap()),
        LaplacianLargestEigenvalue => real(*jacobi_eigenvalues(laplacian(&a)).last().unwrap()),
        LongestInducedCycle => int(subsets(n).filter(|&s| is_induced_cycle(&a, s)).map(|s| s.count_ones() as usize).max().unwrap_or(0)),
        LongestInducedPath => int(subsets(n).filter(|&s| is_induced_path(&a, s)).map(|s| s.count_ones() as usize - 1).max().unwrap_or(0)),
        MatchingNumber => int(max_matching(&a, 0, 0)),
        MaximumDegree => int(bits(all).map(|v| a.rows[v].count_ones() as usize).max().unwrap_or(0)),
        MinimumDegree => int(bits(all).map(|v| a.rows[v].count_ones() as usize).min().unwrap_or(0)),
        NumberOfComponents => int(components(&a)),
        NumberOfEdges => int(m),
        NumberOfSpanningTrees => {
            if a.connected_in(all) {
                InvariantValue::Integer(spanning_trees(&a).into())
            } else {
                int(0)
            }
        }
        NumberOfTriangles => int(subsets(n).filter(|&s| s.count_ones() == 3 && a.edges_in(s) == 3).count()),
        NumberOfVertexOrbits => int(orbit_count(&a, &automorphisms(&a))),
        NumberOfVertices => int(n),
        NumberOfZeroEigenvalues => int(jacobi_eigenvalues(adjacency_matrix(&a)).iter().filter(|x| x.abs() < 1e-6).count()),
        Radius => InvariantValue::int(eccentricities(&a).map_or(-1, |e| *e.iter().min().unwrap() as i64)),
        SecondLargestEigenvalue => {
            let ev = jacobi_eigenvalues(adjacency_matrix(&a));
            real(if n < 2 { 0.0 } else { ev[n - 2] })
        }
        SmallestEigenvalue => real(jacobi_eigenvalues(adjacency_matrix(&a))[0]),
        Treewidth => int(treewidth(&a)),
        VertexConnectivity => int(vertex_connectivity(&a)),
    })
}

/// Equality up to `tol` for reals, exact otherwise.
pub fn agrees(expected: &InvariantValue, got: &InvariantValue, tol: f64) -> bool {
    match (expected, got) {
        (InvariantValue::Real(a), InvariantValue::Real(b)) => (a - b).abs() <= tol,
        (a, b) => a == b,
    }
}

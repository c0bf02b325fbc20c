//! Test support: naive oracles, exhaustive enumeration and random corpora.
//! Nothing here calls the algorithms under test except where noted.

#![allow(dead_code)]

pub mod oracle;
pub mod reference;
pub mod search_oracle;

use std::collections::HashSet;

use graphdb_core::canonical::canonical_key;
use graphdb_core::Graph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Relabels by mapping vertex `v` to `perm[v]`, without the crate's own
/// relabeling code.
pub fn permute(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.order(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

pub fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, e).unwrap()
}

pub fn chvatal() -> Graph {
    let adj: [(usize, &[usize]); 10] = [
        (0, &[1, 4, 6, 9]),
        (1, &[2, 5, 7]),
        (2, &[3, 6, 8]),
        (3, &[4, 7, 9]),
        (4, &[5, 8]),
        (5, &[10, 11]),
        (6, &[10, 11]),
        (7, &[8, 11]),
        (8, &[10]),
        (9, &[10, 11]),
    ];
    Graph::from_edges(12, adj.iter().flat_map(|(u, vs)| vs.iter().map(move |&v| (*u, v)))).unwrap()
}

/// One representative per isomorphism class on exactly `n` vertices, for
/// every `n` up to `max_n` (index 0 is empty), built by adding a vertex to every smaller class
/// in every possible way. Deduplication uses the canonical module.
pub fn all_graphs(max_n: usize) -> Vec<Vec<Graph>> {
    let mut levels: Vec<Vec<Graph>> = vec![Vec::new(), vec![Graph::empty(1).unwrap()]];
    for n in 2..=max_n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &levels[n - 1] {
            for mask in 0u32..(1 << (n - 1)) {
                let edges = g.edges().chain((0..n - 1).filter(|&v| mask >> v & 1 == 1).map(|v| (v, n - 1)));
                let h = Graph::from_edges(n, edges).unwrap();
                if seen.insert(canonical_key(&h)) {
                    next.push(h);
                }
            }
        }
        levels.push(next);
    }
    levels
}

/// Number of unlabeled graphs on `n` vertices by Burnside's lemma: the
/// average over all vertex permutations of 2^(cycles on vertex pairs).
pub fn polya_graph_count(n: usize) -> u64 {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total: u64 = 0;
    let mut count: u64 = 0;
    loop {
        let mut seen = vec![false; pairs.len()];
        let mut cycles = 0;
        for start in 0..pairs.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                let (u, v) = pairs[i];
                i = index(perm[u], perm[v]);
            }
        }
        total += 1u64 << cycles;
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total / count
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Connected counts from total counts by inverting the Euler transform.
pub fn connected_counts(totals: &[u64]) -> Vec<i128> {
    let a: Vec<i128> = totals.iter().map(|&x| x as i128).collect();
    let len = a.len();
    let mut b = vec![0i128; len];
    let mut c = vec![0i128; len];
    for n in 1..len {
        let mut s = n as i128 * a[n];
        for k in 1..n {
            s -= b[k] * a[n - k];
        }
        b[n] = s;
        let mut rest = b[n];
        for d in 1..n {
            if n % d == 0 {
                rest -= d as i128 * c[d];
            }
        }
        c[n] = rest / n as i128;
    }
    c
}

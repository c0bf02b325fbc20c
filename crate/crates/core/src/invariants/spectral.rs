use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::budget::{Budget, Interrupted};
use crate::graph::Graph;

use super::blocks::blocks;

/// Eigenvalue magnitude below which an eigenvalue counts as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-8;

fn eigenvalues_desc(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

pub fn adjacency_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.order();
    let mut m = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        m[(u, v)] = 1.0;
        m[(v, u)] = 1.0;
    }
    eigenvalues_desc(m)
}

pub fn laplacian_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.order();
    let mut m = DMatrix::zeros(n, n);
    for v in 0..n {
        m[(v, v)] = g.degree(v) as f64;
    }
    for (u, v) in g.edges() {
        m[(u, v)] = -1.0;
        m[(v, u)] = -1.0;
    }
    eigenvalues_desc(m)
}

pub struct Spectra {
    pub index: f64,
    pub second_largest: f64,
    pub smallest: f64,
    pub zero_count: usize,
    pub laplacian_largest: f64,
    pub algebraic_connectivity: f64,
}

/// Spectral values; second largest and algebraic connectivity are 0 for K1.
pub fn spectra(g: &Graph) -> Spectra {
    let a = adjacency_spectrum(g);
    let l = laplacian_spectrum(g);
    let n = a.len();
    Spectra {
        index: a[0],
        second_largest: if n > 1 { a[1] } else { 0.0 },
        smallest: a[n - 1],
        zero_count: a.iter().filter(|x| x.abs() < ZERO_EIGENVALUE).count(),
        laplacian_largest: l[0],
        algebraic_connectivity: if n > 1 { l[n - 2] } else { 0.0 },
    }
}

/// Determinant of an integer matrix by fraction-free Bareiss elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>, budget: &Budget) -> Result<BigInt, Interrupted> {
    let n = m.len();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        budget.check()?;
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

fn tree_count_connected(g: &Graph, budget: &Budget) -> Result<BigInt, Interrupted> {
    let n = g.order();
    let mut m = vec![vec![BigInt::zero(); n - 1]; n - 1];
    for (v, row) in m.iter_mut().enumerate() {
        row[v] = BigInt::from(g.degree(v));
    }
    for (u, v) in g.edges() {
        if u < n - 1 && v < n - 1 {
            m[u][v] = BigInt::from(-1);
            m[v][u] = BigInt::from(-1);
        }
    }
    bareiss_determinant(m, budget)
}

/// Spanning tree count: product over blocks, 0 when disconnected.
pub fn spanning_trees(g: &Graph, budget: &Budget) -> Result<BigInt, Interrupted> {
    if !g.is_connected() {
        return Ok(BigInt::zero());
    }
    let mut total = BigInt::one();
    for b in blocks(g) {
        if b.len() > 2 {
            let sub = g.induced_subgraph(&b).expect("block vertices are in range");
            total *= tree_count_connected(&sub, budget)?;
        }
    }
    Ok(total)
}

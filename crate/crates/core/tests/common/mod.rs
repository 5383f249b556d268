//! Shared fixtures and independent oracles for the integration suites.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use schur_privacy::cmatrix::{kron, CMat, C64};
use schur_privacy::{CorrelationMatrix, Graph, DEFAULT_TOL};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn paulis() -> [CMat; 4] {
    let i = c(0.0, 1.0);
    let z0 = c(0.0, 0.0);
    [
        CMat::identity(2),
        CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
        CMat::new(2, 2, vec![z0, -i, i, z0]).unwrap(),
        CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
    ]
}

pub fn kron_all(ms: &[&CMat]) -> CMat {
    ms[1..].iter().fold(ms[0].clone(), |acc, m| kron(&acc, m).unwrap())
}

pub fn cnot_matrix() -> CMat {
    CMat::from_real(4, 4, &[
        1.0, 1.0, 1.0, 0.0,
        1.0, 1.0, 1.0, 0.0,
        1.0, 1.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ])
    .unwrap()
}

pub fn final_example_matrix() -> CMat {
    CMat::from_real(3, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.5, 0.5, 0.5, 1.0]).unwrap()
}

pub fn corr(m: CMat) -> CorrelationMatrix {
    CorrelationMatrix::validate(m, DEFAULT_TOL).unwrap()
}

pub fn shift(n: usize) -> CMat {
    CMat::from_fn(n, n, |i, j| if j == (i + 1) % n { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

pub fn flip12() -> CMat {
    CMat::unit(3, 0, 1).add(&CMat::unit(3, 1, 0)).unwrap()
}

fn unit_vector(rng: &mut StdRng, dim: usize, support: &[usize]) -> Vec<C64> {
    let mut v = vec![c(0.0, 0.0); dim];
    for &k in support {
        v[k] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-3 {
        v = vec![c(0.0, 0.0); dim];
        v[support[0]] = c(1.0, 0.0);
        return v;
    }
    v.into_iter().map(|z| z / norm).collect()
}

fn gram(vectors: &[Vec<C64>]) -> CMat {
    let n = vectors.len();
    let mut m = CMat::from_fn(n, n, |i, j| {
        vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b.conj()).sum()
    });
    for k in 0..n {
        m[(k, k)] = c(1.0, 0.0);
    }
    m
}

/// Gram matrix of random unit vectors with sparse supports (exact zeros)
/// and occasional phase-shifted repeats (unimodular entries).
pub fn random_correlation(rng: &mut StdRng, n: usize) -> CorrelationMatrix {
    let dim = rng.gen_range(1..=4);
    let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(n);
    for _ in 0..n {
        if !vectors.is_empty() && rng.gen_bool(0.25) {
            let src = vectors[rng.gen_range(0..vectors.len())].clone();
            let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
            vectors.push(src.into_iter().map(|z| z * phase).collect());
            continue;
        }
        let k = rng.gen_range(1..=dim);
        let mut idx: Vec<usize> = (0..dim).collect();
        idx.shuffle(rng);
        vectors.push(unit_vector(rng, dim, &idx[..k]));
    }
    CorrelationMatrix::validate(gram(&vectors), DEFAULT_TOL).unwrap()
}

/// Correlation matrix with `m` connected components of size `s` each,
/// scattered by a random permutation. Returns the matrix and the map
/// `(block, offset) -> vertex`.
pub fn random_blocked_correlation(
    rng: &mut StdRng,
    m: usize,
    s: usize,
) -> (CorrelationMatrix, Vec<Vec<usize>>) {
    let n = m * s;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut vectors = vec![vec![c(0.0, 0.0); m * 3]; n];
    let mut layout = vec![vec![0; s]; m];
    for b in 0..m {
        for r in 0..s {
            // dense positive entries inside the block keep it connected
            let mut v = vec![c(0.0, 0.0); m * 3];
            for k in 0..3 {
                v[b * 3 + k] = c(rng.gen_range(0.2..1.0), rng.gen_range(-0.1..0.1));
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            vectors[perm[b * s + r]] = v.into_iter().map(|z| z / norm).collect();
            layout[b][r] = perm[b * s + r];
        }
    }
    (
        CorrelationMatrix::validate(gram(&vectors), DEFAULT_TOL).unwrap(),
        layout,
    )
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(i, j).unwrap();
            }
        }
    }
    g
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Exhaustive maximum independent set; ties go to the lexicographically
/// least sorted vertex list.
pub fn brute_force_alpha(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.vertex_count();
    assert!(n <= 20);
    let mut best: (usize, Vec<usize>) = (0, vec![]);
    for mask in 0u32..(1 << n) {
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if set.len() < best.0 || !g.is_independent(&set) {
            continue;
        }
        if set.len() > best.0 || set < best.1 {
            best = (set.len(), set);
        }
    }
    best
}

/// Rank by Gaussian elimination with partial pivoting on a row list.
pub fn rank_by_elimination(rows: &[Vec<C64>], tol: f64) -> usize {
    let mut a: Vec<Vec<C64>> = rows.to_vec();
    if a.is_empty() {
        return 0;
    }
    let cols = a[0].len();
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..a.len()).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm()));
        let Some(p) = pivot else { break };
        if a[p][col].norm() <= tol {
            continue;
        }
        a.swap(rank, p);
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank {
                let f = row[col] / pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// PSD oracle for small Hermitian matrices: every principal minor is
/// nonnegative (cofactor-expansion determinants).
pub fn psd_by_principal_minors(a: &CMat, tol: f64) -> bool {
    let n = a.rows();
    if !a.is_hermitian(1e-12) {
        return false;
    }
    for mask in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let m: Vec<Vec<C64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[(i, j)]).collect()).collect();
        if det(&m).re < -tol {
            return false;
        }
    }
    true
}

fn det(m: &[Vec<C64>]) -> C64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = c(0.0, 0.0);
    for j in 0..n {
        let minor: Vec<Vec<C64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &z)| z).collect())
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += m[0][j] * det(&minor) * sign;
    }
    acc
}

/// Hermitian matrix with entries drawn from `values`, enumerated by index.
pub fn symmetric_from_code(n: usize, values: &[f64], mut code: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = values[code % values.len()];
            code /= values.len();
            m[(i, j)] = c(v, 0.0);
            m[(j, i)] = c(v, 0.0);
        }
    }
    m
}

//! Correlation matrices: Hermitian, PSD, unit diagonal.
//!
//! A correlation matrix `C` fully describes a Schur-product channel
//! `rho -> C ∘ rho`. Two graphs hang off it: `graph_of` (edges at nonzero
//! off-diagonal entries) and `unitary_graph_of` (edges at unimodular ones).

use alloc::{format, vec::Vec};

use crate::cmatrix::{self, CMat, C64, ONE};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::SIZE_CAP;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix {
    mat: CMat,
    tol: f64,
}

/// Permutation that groups each component of `graph_of(C)` contiguously.
/// `perm[new] = old`, as consumed by [`cmatrix::permute_sym`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPermutation {
    pub perm: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl CorrelationMatrix {
    /// Validates `m` as a correlation matrix.
    ///
    /// Checks run in order Hermitian, unit diagonal, PSD (all scaled by
    /// `1 + max|entry|`); the first violation is reported. Accepted diagonals
    /// are snapped to exactly 1 so tensor powers keep an exact unit diagonal.
    pub fn validate(m: CMat, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "correlation matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if tol.is_nan() || tol < 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance {tol} must be >= 0")));
        }
        let slack = tol * (1.0 + m.max_abs());
        if let Some((row, col)) = m.first_non_hermitian(slack) {
            return Err(Error::NotHermitian { row, col });
        }
        if let Some(index) = (0..m.rows()).find(|&k| (m[(k, k)] - ONE).norm() > slack) {
            return Err(Error::DiagonalNotOne { index });
        }
        let mut m = m;
        for k in 0..m.rows() {
            m[(k, k)] = ONE;
        }
        match cmatrix::min_eigenvalue_if_hermitian(&m, tol)? {
            Some((lam, s)) if lam >= -s => {}
            Some((lam, _)) => return Err(Error::NotPsd { min_eigenvalue: lam }),
            None => unreachable!("Hermiticity checked above"),
        }
        debug_assert!(m.max_abs() <= 1.0 + 2.0 * slack);
        Ok(Self { mat: m, tol })
    }

    /// `C_kl = sum_i a_k^(i) conj(a_l^(i))` from the diagonals of commuting
    /// Kraus operators written in their common eigenbasis.
    ///
    /// Trace preservation (`C_kk = 1`) is checked first and reported as a
    /// [`Error::Normalization`] naming the offending index.
    pub fn from_diagonal_kraus(diags: &[Vec<C64>], tol: f64) -> Result<Self> {
        let first = diags.first().ok_or(Error::Empty("Kraus diagonal list"))?;
        let n = first.len();
        if n == 0 {
            return Err(Error::Empty("Kraus diagonal"));
        }
        if let Some(bad) = diags.iter().find(|d| d.len() != n) {
            return Err(Error::Dimension(format!(
                "Kraus diagonals have lengths {n} and {}",
                bad.len()
            )));
        }
        let c = CMat::from_fn(n, n, |k, l| diags.iter().map(|d| d[k] * d[l].conj()).sum());
        for k in 0..n {
            let v = c[(k, k)].re;
            if libm::fabs(v - 1.0) > tol * (1.0 + c.max_abs()) {
                return Err(Error::Normalization { index: k, value: v });
            }
        }
        // Gram matrices are PSD; validation re-checks within tolerance.
        Self::validate(c, tol)
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `G_C`: edge `(i, j)` iff `|C_ij| > zero_tol`, `i != j`.
    pub fn graph_of(&self, zero_tol: f64) -> Graph {
        let n = self.dim();
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if self.mat[(i, j)].norm() > zero_tol {
                    g.add_edge(i, j).expect("indices in range");
                }
            }
        }
        g
    }

    /// `UG_C`: edge `(i, j)` iff `| |C_ij|^2 - 1 | <= tol`, `i != j`.
    pub fn unitary_graph_of(&self, tol: f64) -> Graph {
        let n = self.dim();
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in (i + 1)..n {
                if libm::fabs(self.mat[(i, j)].norm_sqr() - 1.0) <= tol {
                    g.add_edge(i, j).expect("indices in range");
                }
            }
        }
        g
    }

    /// Off-diagonal pairs `(i, j)`, `i < j`, whose distance from the unit
    /// circle is nonzero but within `100 * tol`: their unitary-edge
    /// classification depends on the tolerance.
    pub fn fragile_entries(&self, tol: f64) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = libm::fabs(self.mat[(i, j)].norm_sqr() - 1.0);
                if d > 4.0 * f64::EPSILON && d <= 100.0 * tol {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Groups the components of `graph_of(C)` contiguously, components in
    /// least-vertex order and vertices ascending inside each.
    pub fn block_permutation(&self, zero_tol: f64) -> BlockPermutation {
        let comps = self.graph_of(zero_tol).connected_components();
        BlockPermutation {
            sizes: comps.iter().map(Vec::len).collect(),
            perm: comps.into_iter().flatten().collect(),
        }
    }

    /// `C^{⊗N}` by repeated Kronecker products, capped at [`SIZE_CAP`].
    pub fn tensor_power(&self, power: usize) -> Result<Self> {
        if power == 0 {
            return Err(Error::InvalidArgument("tensor power must be >= 1".into()));
        }
        let side = checked_pow(self.dim(), power).unwrap_or(usize::MAX);
        if side > SIZE_CAP {
            return Err(Error::Capacity {
                what: "tensor power side",
                requested: side,
                cap: SIZE_CAP,
            });
        }
        let mut acc = self.mat.clone();
        for _ in 1..power {
            acc = cmatrix::kron(&acc, &self.mat)?;
        }
        // products of unit diagonals stay exactly 1
        debug_assert!((0..acc.rows()).all(|k| acc[(k, k)] == ONE));
        Ok(Self {
            mat: acc,
            tol: self.tol,
        })
    }
}

pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

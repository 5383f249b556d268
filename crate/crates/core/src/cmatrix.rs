//! Dense complex matrices and the elementwise, tensor, trace and positivity
//! primitives everything else is built on.
//!
//! Storage is row-major. Kronecker products use the lexicographic index
//! `cols_b * i + k`, and every block-permutation statement elsewhere in the
//! crate is relative to that ordering.

use alloc::{format, vec, vec::Vec};
use core::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::{linalg, DEFAULT_TOL, SIZE_CAP};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMat {
    /// Builds a matrix from row-major data, rejecting empty shapes and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix is empty")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.iter().flatten().copied().collect())
    }

    /// Real row-major data, convenient for the small exact matrices used in
    /// examples and tests.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn all_ones(n: usize) -> Self {
        Self::from_fn(n, n, |_, _| ONE)
    }

    /// Matrix unit `E_ij` in `M_n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "matrix unit index out of range");
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_shape(self, other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_shape(self, other, "sub")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Matrix product. Zero entries of `self` are skipped, which keeps the
    /// monomial (Pauli-like) matrices used for codes cheap to multiply.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `A v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn trace(&self) -> C64 {
        self.diagonal().into_iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Largest entrywise distance, or `None` when the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max),
        )
    }

    /// Entrywise equality within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_some_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.first_non_hermitian(tol).is_none()
    }

    pub(crate) fn first_non_hermitian(&self, tol: f64) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// True when every off-diagonal entry is within `tol` of zero.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].norm() <= tol))
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

fn same_shape(a: &CMat, b: &CMat, op: &str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "{op}: {}x{} vs {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(())
}

fn require_square(a: &CMat, op: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "{op}: {}x{} matrix is not square",
            a.rows, a.cols
        )));
    }
    Ok(())
}

/// Entrywise (Schur / Hadamard) product.
pub fn schur(a: &CMat, b: &CMat) -> Result<CMat> {
    same_shape(a, b, "schur")?;
    Ok(a.zip_with(b, |x, y| x * y))
}

/// Kronecker product with the default [`SIZE_CAP`] on either side.
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat> {
    kron_capped(a, b, SIZE_CAP)
}

pub fn kron_capped(a: &CMat, b: &CMat, cap: usize) -> Result<CMat> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    if rows > cap || cols > cap {
        return Err(Error::Capacity {
            what: "Kronecker product side",
            requested: rows.max(cols),
            cap,
        });
    }
    let mut out = CMat::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            if x == ZERO {
                continue;
            }
            for k in 0..b.rows {
                let dst = (i * b.rows + k) * cols + j * b.cols;
                for (d, &y) in out.data[dst..dst + b.cols].iter_mut().zip(b.row(k)) {
                    *d = x * y;
                }
            }
        }
    }
    Ok(out)
}

/// Hilbert-Schmidt inner product `Tr(a† b)`.
pub fn trace_inner(a: &CMat, b: &CMat) -> Result<C64> {
    same_shape(a, b, "trace_inner")?;
    require_square(a, "trace_inner")?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Result<C64> {
    if a.cols != b.rows || a.rows != b.cols {
        return Err(Error::Dimension(format!(
            "trace_product: {}x{} vs {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut acc = ZERO;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let x = a[(i, j)];
            if x != ZERO {
                acc += x * b[(j, i)];
            }
        }
    }
    Ok(acc)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(a: &CMat) -> Result<Vec<f64>> {
    require_square(a, "hermitian_eigenvalues")?;
    Ok(linalg::hermitian_eigenvalues(a))
}

/// Positive-semidefiniteness within `tol`, scaled by `1 + max|entry|`.
///
/// The matrix must be Hermitian within that slack and its smallest
/// eigenvalue (Jacobi sweep on the real symmetric embedding) must be at
/// least `-tol * (1 + max|entry|)`.
pub fn is_psd(a: &CMat, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue_if_hermitian(a, tol)?.is_some_and(|(lam, slack)| lam >= -slack))
}

/// `Some((lambda_min, slack))` for Hermitian input, `None` otherwise.
pub(crate) fn min_eigenvalue_if_hermitian(a: &CMat, tol: f64) -> Result<Option<(f64, f64)>> {
    require_square(a, "is_psd")?;
    let slack = tol * (1.0 + a.max_abs());
    if !a.is_hermitian(slack) {
        return Ok(None);
    }
    let eig = linalg::hermitian_eigenvalues(a);
    Ok(Some((eig[0], slack)))
}

/// Default-tolerance PSD test.
pub fn is_psd_default(a: &CMat) -> Result<bool> {
    is_psd(a, DEFAULT_TOL)
}

/// Principal submatrix on a strictly increasing index list.
pub fn principal_submatrix(a: &CMat, idx: &[usize]) -> Result<CMat> {
    require_square(a, "principal_submatrix")?;
    if idx.is_empty() {
        return Err(Error::InvalidIndex("index list is empty".into()));
    }
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidIndex(format!(
                "indices must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if let Some(&last) = idx.last() {
        if last >= a.rows {
            return Err(Error::InvalidIndex(format!(
                "index {last} out of range for {}x{}",
                a.rows, a.cols
            )));
        }
    }
    let k = idx.len();
    Ok(CMat::from_fn(k, k, |s, t| a[(idx[s], idx[t])]))
}

/// Symmetric permutation: `result[i][j] = a[perm[i]][perm[j]]`.
pub fn permute_sym(a: &CMat, perm: &[usize]) -> Result<CMat> {
    require_square(a, "permute_sym")?;
    check_permutation(perm, a.rows)?;
    let n = a.rows;
    Ok(CMat::from_fn(n, n, |i, j| a[(perm[i], perm[j])]))
}

pub fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {n} indices",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(format!(
                "{p} is out of range or repeated"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

pub fn invert_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    Ok(inv)
}

//! Small dense kernels: Hermitian eigenvalues and Gram-Schmidt spans.

use alloc::{vec, vec::Vec};

use crate::cmatrix::{CMat, C64, ZERO};

/// Ascending eigenvalues of a Hermitian matrix.
///
/// `H = A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`, whose
/// spectrum is that of `H` with every eigenvalue doubled; cyclic Jacobi then
/// runs on the embedding and every second value is kept.
pub(crate) fn hermitian_eigenvalues(h: &CMat) -> Vec<f64> {
    let n = h.rows();
    let m = 2 * n;
    let mut a = vec![0.0f64; m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so tiny Hermiticity defects do not bias the sweep
            let z = (h[(i, j)] + h[(j, i)].conj()) * 0.5;
            a[i * m + j] = z.re;
            a[(i + n) * m + (j + n)] = z.re;
            a[i * m + (j + n)] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut eig = jacobi_eigenvalues(&mut a, m);
    eig.sort_by(f64::total_cmp);
    eig.into_iter().step_by(2).collect()
}

fn jacobi_eigenvalues(a: &mut [f64], m: usize) -> Vec<f64> {
    let total: f64 = a.iter().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..m {
            for q in (p + 1)..m {
                off += a[p * m + q] * a[p * m + q];
            }
        }
        if off <= 1e-30 * total || off == 0.0 {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * m + q] - a[p * m + p]) / (2.0 * apq);
                let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    libm::sqrt(a.iter().map(|z| z.norm_sqr()).sum())
}

/// Orthonormal basis under the standard inner product, grown one candidate
/// at a time. Candidates whose residual after two projection passes falls
/// below `cut` are treated as dependent.
#[derive(Clone, Debug, Default)]
pub(crate) struct OrthoBasis {
    pub vectors: Vec<Vec<C64>>,
}

impl OrthoBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    /// Component of `v` orthogonal to the current span.
    pub fn residual(&self, v: &[C64]) -> Vec<C64> {
        let mut r = v.to_vec();
        for _ in 0..2 {
            for q in &self.vectors {
                let c = inner(q, &r);
                if c != ZERO {
                    for (x, y) in r.iter_mut().zip(q) {
                        *x -= c * y;
                    }
                }
            }
        }
        r
    }

    pub fn try_push(&mut self, v: &[C64], cut: f64) -> bool {
        let r = self.residual(v);
        let nr = norm(&r);
        if nr <= cut {
            return false;
        }
        self.vectors.push(r.into_iter().map(|z| z / nr).collect());
        true
    }
}

/// Rank of a family of vectors, relative to the largest vector norm.
pub(crate) fn rank(vectors: &[Vec<C64>], rel_tol: f64) -> usize {
    let scale = vectors.iter().map(|v| norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0;
    }
    let mut basis = OrthoBasis::new();
    for v in vectors {
        basis.try_push(v, rel_tol * scale);
    }
    basis.len()
}

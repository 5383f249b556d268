//! Finite-dimensional *-subalgebras of `M_n` held as orthonormal bases
//! under the trace inner product.

use alloc::{format, vec, vec::Vec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cmatrix::{self, CMat, C64, ZERO};
use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::linalg::{self, OrthoBasis};
use crate::{RANK_TOL, VERDICT_TOL};

/// Default number of random vectors tried by the separating-vector test.
pub const SEPARATING_TRIALS: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixAlgebra {
    n: usize,
    basis: Vec<CMat>,
    unital: bool,
    /// A generating set; commutant computations only need these.
    generators: Vec<CMat>,
}

impl MatrixAlgebra {
    /// Smallest *-algebra containing `gens` (and `I` when asked): alternate
    /// adjoints and pairwise products with Gram-Schmidt until the dimension
    /// stops growing.
    pub fn generate(gens: &[CMat], adjoin_identity: bool) -> Result<Self> {
        let n = common_dim(gens)?;
        let mut seeds: Vec<CMat> = Vec::with_capacity(2 * gens.len() + 1);
        if adjoin_identity {
            seeds.push(CMat::identity(n));
        }
        for g in gens {
            seeds.push(g.clone());
            seeds.push(g.adjoint());
        }
        let mut ortho = OrthoBasis::new();
        push_batch(&mut ortho, seeds.iter().map(|m| m.data().to_vec()));
        if ortho.len() == 0 {
            return Err(Error::Empty("generators are all zero"));
        }

        let mut done = 0;
        loop {
            let current: Vec<CMat> = ortho.vectors.iter().map(|v| to_mat(n, v)).collect();
            let before = current.len();
            let mut products = Vec::new();
            for (i, a) in current.iter().enumerate() {
                for (j, b) in current.iter().enumerate() {
                    if i >= done || j >= done {
                        products.push(a.matmul(b)?.into_data());
                    }
                }
            }
            done = before;
            push_batch(&mut ortho, products.into_iter());
            if ortho.len() == before {
                break;
            }
            if ortho.len() > n * n {
                return Err(Error::NotConverged(n * n));
            }
        }
        let basis: Vec<CMat> = ortho.vectors.iter().map(|v| to_mat(n, v)).collect();
        let mut alg = Self {
            n,
            basis,
            unital: false,
            generators: seeds,
        };
        alg.unital = alg.contains(&CMat::identity(n), VERDICT_TOL);
        Ok(alg)
    }

    /// Wraps a spanning set that is already a *-algebra; closure under
    /// adjoint and products is checked.
    pub fn from_basis(basis: &[CMat]) -> Result<Self> {
        let n = common_dim(basis)?;
        let mut ortho = OrthoBasis::new();
        push_batch(&mut ortho, basis.iter().map(|m| m.data().to_vec()));
        let alg = Self::from_orthonormal(
            n,
            ortho.vectors.iter().map(|v| to_mat(n, v)).collect(),
            Vec::new(),
        );
        if !alg.is_closed(VERDICT_TOL) {
            return Err(Error::InvalidArgument(
                "span is not closed under adjoint and multiplication".into(),
            ));
        }
        Ok(alg)
    }

    /// Trusted constructor for bases that are orthonormal and closed by
    /// construction.
    pub(crate) fn from_orthonormal(n: usize, basis: Vec<CMat>, generators: Vec<CMat>) -> Self {
        let mut alg = Self {
            n,
            basis,
            unital: false,
            generators,
        };
        alg.unital = alg.contains(&CMat::identity(n), VERDICT_TOL);
        alg
    }

    /// `ℂ I`.
    pub fn scalars(n: usize) -> Self {
        let s = C64::new(1.0 / libm::sqrt(n as f64), 0.0);
        Self::from_orthonormal(n, vec![CMat::identity(n).scale(s)], Vec::new())
    }

    /// The diagonal algebra `Δ_n`.
    pub fn diagonal(n: usize) -> Self {
        opsystem_algebra(&Graph::empty(n))
    }

    /// `M_n`.
    pub fn full(n: usize) -> Self {
        opsystem_algebra(&Graph::complete(n))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// Distance from `x` to the span (Frobenius norm).
    pub fn residual(&self, x: &CMat) -> f64 {
        let mut r = x.data().to_vec();
        for _ in 0..2 {
            for b in &self.basis {
                let c = linalg::inner(b.data(), &r);
                if c != ZERO {
                    for (v, w) in r.iter_mut().zip(b.data()) {
                        *v -= c * w;
                    }
                }
            }
        }
        linalg::norm(&r)
    }

    pub fn contains(&self, x: &CMat, tol: f64) -> bool {
        x.shape() == (self.n, self.n) && self.residual(x) <= tol * (1.0 + x.frobenius_norm())
    }

    /// Same subspace: equal dimension and mutual containment.
    pub fn same_span(&self, other: &Self, tol: f64) -> bool {
        self.n == other.n
            && self.dim() == other.dim()
            && other.basis.iter().all(|b| self.contains(b, tol))
            && self.basis.iter().all(|b| other.contains(b, tol))
    }

    /// Adjoints and pairwise products of basis elements stay in the span.
    pub fn is_closed(&self, tol: f64) -> bool {
        self.basis.iter().all(|a| self.contains(&a.adjoint(), tol))
            && self.basis.iter().all(|a| {
                self.basis
                    .iter()
                    .all(|b| a.matmul(b).is_ok_and(|p| self.contains(&p, tol)))
            })
    }

    pub fn quasiorthogonal(&self, other: &Self) -> Result<bool> {
        quasiorthogonal_spans(&self.basis, &other.basis, VERDICT_TOL)
    }

    pub fn has_separating_vector(&self, trials: usize, seed: u64) -> bool {
        self.separating_vector(trials, seed).is_some()
    }

    pub fn separating_vector(&self, trials: usize, seed: u64) -> Option<Vec<C64>> {
        separating_vector(&self.basis, trials, seed)
    }

    pub fn constant_diagonal(&self) -> bool {
        constant_diagonal(&self.basis, VERDICT_TOL)
    }

    /// Dimension of the center, as the nullity of `x -> ([x, g])_g` over the
    /// generators restricted to the algebra.
    pub fn center_dimension(&self) -> Result<usize> {
        if !self.unital {
            return Err(Error::NonUnital);
        }
        let probes: &[CMat] = if self.generators.is_empty() {
            &self.basis
        } else {
            &self.generators
        };
        let mut columns = Vec::with_capacity(self.dim());
        for b in &self.basis {
            let mut col = Vec::with_capacity(probes.len() * self.n * self.n);
            for g in probes {
                let comm = b.matmul(g)?.sub(&g.matmul(b)?)?;
                col.extend_from_slice(comm.data());
            }
            columns.push(col);
        }
        // commutators of orthonormal elements have norm O(|g|); an absolute
        // floor avoids treating an all-zero family as full rank
        let scale = probes.iter().map(CMat::frobenius_norm).fold(1.0, f64::max);
        let mut ortho = OrthoBasis::new();
        for c in &columns {
            ortho.try_push(c, RANK_TOL * scale);
        }
        Ok(self.dim() - ortho.len())
    }
}

/// `S_{G*}`: matrix units `E_ij` with `i`, `j` in the same connected
/// component of `g` (diagonal included).
pub fn opsystem_algebra(g: &Graph) -> MatrixAlgebra {
    let n = g.vertex_count();
    let mut basis = Vec::new();
    for comp in g.connected_components() {
        for &i in &comp {
            for &j in &comp {
                basis.push(CMat::unit(n, i, j));
            }
        }
    }
    basis.sort_by_key(|m| {
        let pos = m.data().iter().position(|&z| z != ZERO).unwrap_or(0);
        (pos / n != pos % n, pos)
    });
    MatrixAlgebra::from_orthonormal(n, basis, Vec::new())
}

/// `n Tr(s a) = Tr(s) Tr(a)` for every pair drawn from the two spans.
pub fn quasiorthogonal_spans(a: &[CMat], b: &[CMat], tol: f64) -> Result<bool> {
    Ok(quasiorthogonality_defect(a, b)? <= tol)
}

/// Largest `|n Tr(s a) - Tr(s) Tr(a)| / (n max(1, |s| |a|))` over the bases.
pub fn quasiorthogonality_defect(a: &[CMat], b: &[CMat]) -> Result<f64> {
    let n = common_dim(a)?;
    if common_dim(b)? != n {
        return Err(Error::Dimension(format!(
            "algebras act on {n} and {} dimensions",
            b[0].rows()
        )));
    }
    let nn = n as f64;
    let tb: Vec<(C64, f64)> = b.iter().map(|x| (x.trace(), x.frobenius_norm())).collect();
    let mut worst: f64 = 0.0;
    for s in a {
        let (ts, ns) = (s.trace(), s.frobenius_norm());
        for (x, &(tx, nx)) in b.iter().zip(&tb) {
            let lhs = cmatrix::trace_product(s, x)? * nn;
            let d = (lhs - ts * tx).norm() / (nn * (ns * nx).max(1.0));
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Samples complex Gaussian vectors `v` and accepts the first for which
/// `{b_i v}` has full rank. Success is a certificate; failure after all
/// trials is probabilistic.
pub fn separating_vector(basis: &[CMat], trials: usize, seed: u64) -> Option<Vec<C64>> {
    let n = basis.first()?.rows();
    if basis.len() > n {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v: Vec<C64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let images: Vec<Vec<C64>> = basis
            .iter()
            .map(|b| b.mul_vec(&v).expect("square basis"))
            .collect();
        if linalg::rank(&images, RANK_TOL) == basis.len() {
            return Some(v);
        }
    }
    None
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    // Box-Muller; u1 in (0, 1]
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = libm::sqrt(-2.0 * libm::log(u1));
    let t = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * libm::cos(t), r * libm::sin(t))
}

/// Every element has all diagonal entries equal.
pub fn constant_diagonal(basis: &[CMat], tol: f64) -> bool {
    basis.iter().all(|b| {
        let d0 = b[(0, 0)];
        (1..b.rows()).all(|i| (b[(i, i)] - d0).norm() <= tol)
    })
}

fn common_dim(mats: &[CMat]) -> Result<usize> {
    let first = mats.first().ok_or(Error::Empty("matrix list"))?;
    let n = first.rows();
    if let Some(m) = mats.iter().find(|m| m.shape() != (n, n)) {
        return Err(Error::Dimension(format!(
            "expected {n}x{n} matrices, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(n)
}

fn push_batch(ortho: &mut OrthoBasis, batch: impl Iterator<Item = Vec<C64>>) {
    let batch: Vec<Vec<C64>> = batch.collect();
    let scale = batch.iter().map(|v| linalg::norm(v)).fold(1.0, f64::max);
    for v in &batch {
        ortho.try_push(v, RANK_TOL * scale);
    }
}

fn to_mat(n: usize, v: &[C64]) -> CMat {
    CMat::new(n, n, v.to_vec()).expect("square data of finite entries")
}

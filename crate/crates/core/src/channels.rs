//! The Schur-product channel `rho -> C ∘ rho`, its adjoint, and the
//! privatisation check.

use alloc::{format, vec::Vec};

use crate::cmatrix::{self, CMat, C64, ZERO};
use crate::correlation::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, OrthoBasis};
use crate::{RANK_TOL, VERDICT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct SchurChannel {
    corr: CorrelationMatrix,
}

/// How the fixed output state is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrivacyMode {
    /// `rho0 = Φ(u) / Tr(u)` with `u` the unit of the span.
    General,
    /// `rho0 = I / n`; also runs the structural zero-pattern test.
    Unit,
}

/// The first basis element whose image is not `Tr(b) rho0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FailureWitness {
    pub index: usize,
    pub element: CMat,
    pub image: CMat,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrivacyVerdict {
    pub is_private: bool,
    /// The fixed output state, present when private.
    pub rho0: Option<CMat>,
    pub max_residual: f64,
    pub failure: Option<FailureWitness>,
    /// Unit mode only: every element has constant diagonal and
    /// `b_ij C_ij = 0` off the diagonal.
    pub structural: Option<bool>,
}

impl SchurChannel {
    pub fn new(corr: CorrelationMatrix) -> Self {
        Self { corr }
    }

    pub fn correlation(&self) -> &CorrelationMatrix {
        &self.corr
    }

    pub fn dim(&self) -> usize {
        self.corr.dim()
    }

    /// `Φ^{⊗N}`, i.e. the channel of `C^{⊗N}`.
    pub fn tensor_power(&self, power: usize) -> Result<Self> {
        Ok(Self::new(self.corr.tensor_power(power)?))
    }

    pub fn apply(&self, rho: &CMat) -> Result<CMat> {
        cmatrix::schur(self.corr.matrix(), rho)
    }

    /// `Φ†(X) = conj(C) ∘ X`.
    pub fn adjoint_apply(&self, x: &CMat) -> Result<CMat> {
        let c = self.corr.matrix();
        if c.shape() != x.shape() {
            return Err(Error::Dimension(format!(
                "channel on {}x{} applied to {}x{}",
                c.rows(),
                c.cols(),
                x.rows(),
                x.cols()
            )));
        }
        Ok(CMat::from_fn(x.rows(), x.cols(), |i, j| c[(i, j)].conj() * x[(i, j)]))
    }

    /// Decides whether the channel maps every density in `span(basis)` to a
    /// single state `rho0`, by checking `Φ(b) = Tr(b) rho0` on each basis
    /// element (linearity covers the span).
    pub fn private_check(&self, basis: &[CMat], mode: PrivacyMode) -> Result<PrivacyVerdict> {
        self.private_check_with_tol(basis, mode, VERDICT_TOL)
    }

    pub fn private_check_with_tol(
        &self,
        basis: &[CMat],
        mode: PrivacyMode,
        tol: f64,
    ) -> Result<PrivacyVerdict> {
        if basis.is_empty() {
            return Err(Error::Empty("basis"));
        }
        let n = self.dim();
        if let Some(b) = basis.iter().find(|b| b.shape() != (n, n)) {
            return Err(Error::Dimension(format!(
                "basis element is {}x{}, channel acts on {n}x{n}",
                b.rows(),
                b.cols()
            )));
        }
        let rho0 = match mode {
            PrivacyMode::Unit => CMat::identity(n).scale(C64::new(1.0 / n as f64, 0.0)),
            PrivacyMode::General => {
                let unit = span_unit(basis)?;
                let tr = unit.trace();
                if tr.norm() <= tol {
                    return Err(Error::DegenerateUnit("unit of the span has zero trace".into()));
                }
                self.apply(&unit)?.scale(tr.inv())
            }
        };

        let mut max_residual: f64 = 0.0;
        let mut failure = None;
        for (index, b) in basis.iter().enumerate() {
            let image = self.apply(b)?;
            let expected = rho0.scale(b.trace());
            let residual = image.max_abs_diff(&expected).expect("same shape");
            max_residual = max_residual.max(residual);
            if residual > tol && failure.is_none() {
                failure = Some(FailureWitness {
                    index,
                    element: b.clone(),
                    image,
                    residual,
                });
            }
        }
        let structural = match mode {
            PrivacyMode::Unit => Some(basis.iter().all(|b| self.zero_pattern_ok(b, tol))),
            PrivacyMode::General => None,
        };
        let is_private = failure.is_none();
        Ok(PrivacyVerdict {
            is_private,
            rho0: is_private.then_some(rho0),
            max_residual,
            failure,
            structural,
        })
    }

    /// Constant diagonal and `b_ij C_ij = 0` for `i != j`.
    fn zero_pattern_ok(&self, b: &CMat, tol: f64) -> bool {
        let c = self.corr.matrix();
        let n = self.dim();
        let d0 = b[(0, 0)];
        (0..n).all(|i| (b[(i, i)] - d0).norm() <= tol)
            && (0..n).all(|i| (0..n).all(|j| i == j || (b[(i, j)] * c[(i, j)]).norm() <= tol))
    }

    /// Matrix-unit basis of `range(Φ†) = S_{G_C}`: all `E_ii`, then `E_ij`
    /// for ordered pairs with `|C_ij| > zero_tol`.
    pub fn range_opsystem(&self, zero_tol: f64) -> Vec<CMat> {
        let n = self.dim();
        let c = self.corr.matrix();
        let mut out: Vec<CMat> = (0..n).map(|i| CMat::unit(n, i, i)).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j && c[(i, j)].norm() > zero_tol {
                    out.push(CMat::unit(n, i, j));
                }
            }
        }
        out
    }

    /// Index pairs, diagonal included, where `|C_ij|^2` is 1 within `tol`.
    /// Operators supported there are fixed by `Φ ∘ Φ†`.
    pub fn unitary_pattern(&self, tol: f64) -> Vec<(usize, usize)> {
        let n = self.dim();
        let c = self.corr.matrix();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if libm::fabs(c[(i, j)].norm_sqr() - 1.0) <= tol {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Unit of a *-closed span: the projection onto the joint range of the basis
/// elements, which must itself lie in the span.
pub fn span_unit(basis: &[CMat]) -> Result<CMat> {
    let n = basis.first().ok_or(Error::Empty("basis"))?.rows();
    let mut cols = OrthoBasis::new();
    let scale = basis.iter().map(CMat::max_abs).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::DegenerateUnit("all basis elements are zero".into()));
    }
    for b in basis {
        for j in 0..n {
            let col: Vec<C64> = (0..n).map(|i| b[(i, j)]).collect();
            cols.try_push(&col, RANK_TOL * scale * libm::sqrt(n as f64));
        }
    }
    let mut p = CMat::zeros(n, n);
    for q in &cols.vectors {
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += q[i] * q[j].conj();
            }
        }
    }
    let mut span = OrthoBasis::new();
    let fro = basis.iter().map(CMat::frobenius_norm).fold(0.0, f64::max);
    for b in basis {
        span.try_push(b.data(), RANK_TOL * fro);
    }
    let off = linalg::norm(&span.residual(p.data()));
    if off > 1e-8 * (1.0 + p.frobenius_norm()) {
        return Err(Error::DegenerateUnit(format!(
            "projection onto the joint range is not in the span (distance {off:e})"
        )));
    }
    // clean roundoff on an exact projection
    Ok(p.map(|z| if z.norm() < 1e-14 { ZERO } else { z }))
}

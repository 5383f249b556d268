//! Schur-product channels and their privacy structure.
//!
//! A random unitary channel whose Kraus operators commute acts, in a common
//! eigenbasis, as `rho -> C ∘ rho` for a correlation matrix `C`. This crate
//! models such channels, derives the graphs attached to `C`, decides whether a
//! channel privatises a given operator algebra, and constructs certified
//! private algebras for tensor powers of the channel.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and the
//! command-line front end live in the `schur-privacy-cli` crate.

#![no_std]

extern crate alloc;

pub mod algebras;
pub mod channels;
pub mod cmatrix;
pub mod codegen;
pub mod correlation;
pub mod error;
pub mod graphs;
mod linalg;

pub use algebras::MatrixAlgebra;
pub use channels::{PrivacyMode, PrivacyVerdict, SchurChannel};
pub use cmatrix::{CMat, C64};
pub use codegen::{PrivacyReport, PrivateCodeCertificate};
pub use correlation::CorrelationMatrix;
pub use error::{Error, Result};
pub use graphs::Graph;

/// Default Hermiticity / PSD tolerance, scaled by `1 + max|entry|`.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default threshold below which a correlation entry counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
/// Entrywise tolerance for privatisation verdicts.
pub const VERDICT_TOL: f64 = 1e-9;
/// Relative singular-value cut used for rank decisions.
pub const RANK_TOL: f64 = 1e-9;
/// Largest matrix side produced by Kronecker products and strong products.
pub const SIZE_CAP: usize = 4096;
/// Largest graph handed to the exact independence-number search.
pub const SEARCH_CAP: usize = 64;

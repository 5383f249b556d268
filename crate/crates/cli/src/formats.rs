//! JSON exchange formats. Complex entries are `[re, im]` pairs; bare reals
//! are accepted on input. Graph and index lists are 1-based.

use schur_privacy::codegen::{IndexSets, PrivateCodeCertificate};
use schur_privacy::{CMat, CorrelationMatrix, Graph, C64};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

impl From<Entry> for C64 {
    fn from(e: Entry) -> Self {
        match e {
            Entry::Pair([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct MatrixIn {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixOut {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMat> for MatrixOut {
    fn from(m: &CMat) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl MatrixIn {
    pub fn to_cmat(&self) -> Result<CMat, String> {
        if self.data.len() != self.rows {
            return Err(format!("\"rows\" is {} but data has {} rows", self.rows, self.data.len()));
        }
        if let Some((i, r)) = self.data.iter().enumerate().find(|(_, r)| r.len() != self.cols) {
            return Err(format!("row {} has {} entries, expected {}", i + 1, r.len(), self.cols));
        }
        let data = self.data.iter().flatten().map(|&e| C64::from(e)).collect();
        CMat::new(self.rows, self.cols, data).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct KrausIn {
    pub n: usize,
    pub diagonals: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        Self {
            n: g.vertex_count(),
            edges: g.edges().into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Graph, String> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[i, j] in &self.edges {
            if i == 0 || j == 0 {
                return Err(format!("edge [{i}, {j}]: vertices are 1-based"));
            }
            edges.push((i - 1, j - 1));
        }
        Graph::from_edges(self.n, &edges).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AlgebraIn {
    Tagged {
        #[serde(default)]
        unital: Option<bool>,
        basis: Vec<MatrixIn>,
    },
    Bare(Vec<MatrixIn>),
}

/// A spanning set as read from disk, plus the declared unital flag.
pub struct AlgebraSpan {
    pub basis: Vec<CMat>,
    pub declared_unital: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraOut {
    pub unital: bool,
    pub basis: Vec<MatrixOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexSetsOut {
    pub natural: Vec<usize>,
    pub block_order: Vec<usize>,
}

impl From<&IndexSets> for IndexSetsOut {
    fn from(s: &IndexSets) -> Self {
        Self {
            natural: s.natural.iter().map(|i| i + 1).collect(),
            block_order: s.block_order.iter().map(|i| i + 1).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOut {
    pub check: &'static str,
    pub pass: bool,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateOut {
    pub base_dim: usize,
    pub power: usize,
    pub ambient_dim: usize,
    pub verified: bool,
    pub algebra_dim: usize,
    pub idle_qubit: bool,
    pub code_indices: IndexSetsOut,
    pub identity_indices: IndexSetsOut,
    pub algebra: AlgebraOut,
    pub rho0: MatrixOut,
    pub transcript: Vec<CheckOut>,
    pub unital_description: String,
}

impl From<&PrivateCodeCertificate> for CertificateOut {
    fn from(c: &PrivateCodeCertificate) -> Self {
        Self {
            base_dim: c.base_dim,
            power: c.power,
            ambient_dim: c.ambient_dim,
            verified: c.verified,
            algebra_dim: c.algebra.dim(),
            idle_qubit: c.idle_qubit,
            code_indices: (&c.code_indices).into(),
            identity_indices: (&c.identity_indices).into(),
            algebra: AlgebraOut {
                unital: c.algebra.is_unital(),
                basis: c.algebra.basis().iter().map(MatrixOut::from).collect(),
            },
            rho0: (&c.rho0).into(),
            transcript: c
                .transcript
                .iter()
                .map(|r| CheckOut {
                    check: r.check,
                    pass: r.pass,
                    max_residual: r.max_residual,
                })
                .collect(),
            unital_description: unital_description(c),
        }
    }
}

/// The unital variant: the code algebra on the code indices plus scalars on
/// their complement. It is a *-algebra but not private as a whole.
pub fn unital_description(c: &PrivateCodeCertificate) -> String {
    let k = c.code_indices.natural.len();
    let rest = c.ambient_dim - k;
    format!(
        "M_{} on {} code indices ⊕ ℂ·I_{} on the complement (reference only; \
         the verified algebra is zero on the complement)",
        1usize << (c.power / 2),
        k,
        rest
    )
}

fn parse_value(text: &str, path: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        msg: e.to_string(),
    })
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, path: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Parse {
        path: path.to_string(),
        msg: format!("not a {what} file: {e}"),
    })
}

/// Reads either a matrix file or a Kraus-diagonal file (detected by the
/// `diagonals` key) and validates it as a correlation matrix.
pub fn parse_correlation(text: &str, path: &str, tol: f64) -> Result<CorrelationMatrix, CliError> {
    let v = parse_value(text, path)?;
    let parse_err = |msg: String| CliError::Parse {
        path: path.to_string(),
        msg,
    };
    if v.get("diagonals").is_some() {
        let k: KrausIn = from_value(v, path, "Kraus")?;
        let diags: Vec<Vec<C64>> = k
            .diagonals
            .iter()
            .map(|d| d.iter().map(|&e| C64::from(e)).collect())
            .collect();
        if let Some(d) = diags.iter().find(|d| d.len() != k.n) {
            return Err(parse_err(format!("diagonal of length {}, expected n = {}", d.len(), k.n)));
        }
        CorrelationMatrix::from_diagonal_kraus(&diags, tol).map_err(CliError::from)
    } else {
        let m: MatrixIn = from_value(v, path, "matrix")?;
        let m = m.to_cmat().map_err(parse_err)?;
        CorrelationMatrix::validate(m, tol).map_err(CliError::from)
    }
}

pub fn parse_matrix(text: &str, path: &str) -> Result<CMat, CliError> {
    let m: MatrixIn = from_value(parse_value(text, path)?, path, "matrix")?;
    m.to_cmat().map_err(|msg| CliError::Parse {
        path: path.to_string(),
        msg,
    })
}

pub fn parse_algebra(text: &str, path: &str) -> Result<AlgebraSpan, CliError> {
    let a: AlgebraIn = from_value(parse_value(text, path)?, path, "algebra")?;
    let (declared_unital, mats) = match a {
        AlgebraIn::Tagged { unital, basis } => (unital, basis),
        AlgebraIn::Bare(basis) => (None, basis),
    };
    if mats.is_empty() {
        return Err(CliError::Parse {
            path: path.to_string(),
            msg: "algebra basis is empty".into(),
        });
    }
    let basis = mats
        .iter()
        .enumerate()
        .map(|(k, m)| {
            m.to_cmat().map_err(|msg| CliError::Parse {
                path: path.to_string(),
                msg: format!("basis element {}: {msg}", k + 1),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AlgebraSpan {
        basis,
        declared_unital,
    })
}

//! Constructions with certificates: identity principal submatrices of
//! `C^{⊗N}`, the paired-Pauli constant-diagonal algebra, and private
//! algebras for `Φ^{⊗N}` whenever `G_C` is disconnected.

use alloc::{format, string::String, vec, vec::Vec};

use crate::algebras::{opsystem_algebra, MatrixAlgebra};
use crate::channels::{PrivacyMode, SchurChannel};
use crate::cmatrix::{self, kron, CMat, C64, ZERO};
use crate::correlation::{checked_pow, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::graphs::{Graph, IndependentSet};
use crate::{DEFAULT_TOL, DEFAULT_ZERO_TOL, SEARCH_CAP, SIZE_CAP, VERDICT_TOL};

/// The same index set in two orderings of `C^{⊗N}`: natural Kronecker
/// order, and the order in which each component block is contiguous.
/// Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSets {
    pub natural: Vec<usize>,
    pub block_order: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub check: &'static str,
    pub pass: bool,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrivateCodeCertificate {
    pub base_dim: usize,
    pub power: usize,
    /// `n^N`.
    pub ambient_dim: usize,
    /// The zero-padded embedding of `block_algebra` on `code_indices`.
    pub algebra: MatrixAlgebra,
    /// Paired-Pauli algebra on `2^N` dimensions before embedding.
    pub block_algebra: MatrixAlgebra,
    pub rho0: CMat,
    /// The `2^N` indices carrying the code.
    pub code_indices: IndexSets,
    /// All `m^N` indices of the identity principal submatrix.
    pub identity_indices: IndexSets,
    pub verified: bool,
    pub transcript: Vec<CheckRecord>,
    /// Odd `N` leaves one qubit of the block as an idle identity factor.
    pub idle_qubit: bool,
}

fn paulis() -> [CMat; 4] {
    let i = C64::new(0.0, 1.0);
    [
        CMat::identity(2),
        CMat::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2"),
        CMat::new(2, 2, vec![ZERO, -i, i, ZERO]).expect("2x2"),
        CMat::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2"),
    ]
}

/// `{I⊗I, I⊗X, Y⊗Y, Y⊗Z}`: a copy of `M_2` inside `M_4` whose
/// non-identity elements have zero diagonal.
fn pair_basis() -> Result<[CMat; 4]> {
    let [id, x, y, z] = paulis();
    Ok([kron(&id, &id)?, kron(&id, &x)?, kron(&y, &y)?, kron(&y, &z)?])
}

/// Tensor product over qubit pairs `(1,2), (3,4), ...` of the pair algebra,
/// with an identity factor on the last qubit when `n_qubits` is odd.
/// The result is isomorphic to `M_{2^{⌊n/2⌋}}` and every element has
/// constant diagonal.
pub fn paired_pauli_algebra(n_qubits: usize) -> Result<MatrixAlgebra> {
    if n_qubits < 2 {
        return Err(Error::InvalidArgument(format!(
            "paired-Pauli algebra needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let dim = checked_pow(2, n_qubits).unwrap_or(usize::MAX);
    if dim > SIZE_CAP {
        return Err(Error::Capacity {
            what: "paired-Pauli ambient dimension",
            requested: dim,
            cap: SIZE_CAP,
        });
    }
    let pairs = n_qubits / 2;
    let local = pair_basis()?;
    let id2 = CMat::identity(2);

    let mut elems = vec![CMat::identity(1)];
    for _ in 0..pairs {
        let mut next = Vec::with_capacity(elems.len() * 4);
        for e in &elems {
            for l in &local {
                next.push(kron(e, l)?);
            }
        }
        elems = next;
    }
    if n_qubits % 2 == 1 {
        elems = elems.iter().map(|e| kron(e, &id2)).collect::<Result<_>>()?;
    }

    let mut generators = Vec::with_capacity(2 * pairs);
    for p in 0..pairs {
        // I⊗X and Y⊗Z generate the pair algebra
        for l in [&local[1], &local[3]] {
            let before = CMat::identity(1 << (2 * p));
            let after = CMat::identity(dim >> (2 * p + 2));
            generators.push(kron(&kron(&before, l)?, &after)?);
        }
    }

    let s = C64::new(1.0 / libm::sqrt(dim as f64), 0.0);
    let basis = elems.into_iter().map(|e| e.scale(s)).collect();
    Ok(MatrixAlgebra::from_orthonormal(dim, basis, generators))
}

/// Indices of an `m^N x m^N` identity principal submatrix of `C^{⊗N}` for a
/// correlation matrix whose components have the given sizes and sit
/// contiguously in that order.
///
/// One index per product block `(i_1, ..., i_N)`, blocks in lexicographic
/// order: the block start in block order, and the Kronecker index of the
/// components' first vertices in natural order.
pub fn identity_submatrix_indices(component_sizes: &[usize], power: usize) -> Result<IndexSets> {
    if component_sizes.is_empty() {
        return Err(Error::Empty("component sizes"));
    }
    if component_sizes.contains(&0) {
        return Err(Error::InvalidArgument("component sizes must be >= 1".into()));
    }
    let starts: Vec<usize> = component_sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let n: usize = component_sizes.iter().sum();
    product_indices(component_sizes, &starts, n, power)
}

/// As [`identity_submatrix_indices`], for the actual components of
/// `graph_of(c)` (which need not be contiguous).
pub fn identity_indices_for(
    c: &CorrelationMatrix,
    power: usize,
    zero_tol: f64,
) -> Result<IndexSets> {
    let comps = c.graph_of(zero_tol).connected_components();
    let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    let firsts: Vec<usize> = comps.iter().map(|c| c[0]).collect();
    product_indices(&sizes, &firsts, c.dim(), power)
}

fn product_indices(
    sizes: &[usize],
    firsts: &[usize],
    n: usize,
    power: usize,
) -> Result<IndexSets> {
    if power == 0 {
        return Err(Error::InvalidArgument("tensor power must be >= 1".into()));
    }
    let m = sizes.len();
    let count = checked_pow(m, power).filter(|&c| c <= SIZE_CAP).ok_or(Error::Capacity {
        what: "identity submatrix size m^N",
        requested: checked_pow(m, power).unwrap_or(usize::MAX),
        cap: SIZE_CAP,
    })?;
    checked_pow(n, power).ok_or(Error::Capacity {
        what: "tensor power side",
        requested: usize::MAX,
        cap: SIZE_CAP,
    })?;

    let mut natural = Vec::with_capacity(count);
    let mut block_order = Vec::with_capacity(count);
    let mut tuple = vec![0usize; power];
    let mut offset = 0;
    for _ in 0..count {
        block_order.push(offset);
        natural.push(tuple.iter().fold(0, |acc, &c| acc * n + firsts[c]));
        offset += tuple.iter().map(|&c| sizes[c]).product::<usize>();
        // lexicographic odometer, last coordinate fastest
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    Ok(IndexSets {
        natural,
        block_order,
    })
}

/// Places `block` on rows and columns `indices` of a zero `ambient`-square
/// matrix.
pub fn embed(block: &CMat, indices: &[usize], ambient: usize) -> CMat {
    let mut out = CMat::zeros(ambient, ambient);
    for (s, &i) in indices.iter().enumerate() {
        for (t, &j) in indices.iter().enumerate() {
            out[(i, j)] = block[(s, t)];
        }
    }
    out
}

/// A private algebra `≅ M_{2^{⌊N/2⌋}}` for `Φ^{⊗N}`, verified.
///
/// The paired-Pauli algebra on `2^N` qubit-indices is zero-padded onto the
/// first `2^N` indices of the identity principal submatrix of `C^{⊗N}`.
/// Every density in it is sent to `P_J' / 2^N`.
pub fn private_code_tensor_power(
    c: &CorrelationMatrix,
    power: usize,
) -> Result<PrivateCodeCertificate> {
    private_code_tensor_power_with(c, power, DEFAULT_ZERO_TOL)
}

pub fn private_code_tensor_power_with(
    c: &CorrelationMatrix,
    power: usize,
    zero_tol: f64,
) -> Result<PrivateCodeCertificate> {
    if power < 2 {
        return Err(Error::InvalidArgument(format!(
            "construction needs tensor power N >= 2, got {power}"
        )));
    }
    let comps = c.graph_of(zero_tol).connected_components();
    if comps.len() < 2 {
        return Err(Error::Obstruction);
    }
    let n = c.dim();
    let ambient = checked_pow(n, power).filter(|&s| s <= SIZE_CAP).ok_or(Error::Capacity {
        what: "tensor power side",
        requested: checked_pow(n, power).unwrap_or(usize::MAX),
        cap: SIZE_CAP,
    })?;
    let cp = c.tensor_power(power)?;
    let identity_indices = identity_indices_for(c, power, zero_tol)?;
    let k = 1usize << power;
    let code_indices = IndexSets {
        natural: identity_indices.natural[..k].to_vec(),
        block_order: identity_indices.block_order[..k].to_vec(),
    };

    let mut transcript = Vec::new();

    let sub = cmatrix::principal_submatrix(cp.matrix(), &identity_indices.natural)?;
    let resid = sub
        .max_abs_diff(&CMat::identity(sub.rows()))
        .expect("square");
    transcript.push(CheckRecord {
        check: "zero_pattern",
        pass: resid <= VERDICT_TOL,
        max_residual: resid,
    });

    let block_algebra = paired_pauli_algebra(power)?;
    let want_dim = 1usize << (2 * (power / 2));
    transcript.push(CheckRecord {
        check: "algebra_dimension",
        pass: block_algebra.dim() == want_dim,
        max_residual: block_algebra.dim().abs_diff(want_dim) as f64,
    });

    let spread = block_algebra
        .basis()
        .iter()
        .flat_map(|b| {
            let d0 = b[(0, 0)];
            b.diagonal().into_iter().map(move |d| (d - d0).norm())
        })
        .fold(0.0, f64::max);
    transcript.push(CheckRecord {
        check: "constant_diagonal",
        pass: spread <= VERDICT_TOL,
        max_residual: spread,
    });

    let center = block_algebra.center_dimension()?;
    transcript.push(CheckRecord {
        check: "center_dimension",
        pass: center == 1,
        max_residual: center.abs_diff(1) as f64,
    });

    let basis: Vec<CMat> = block_algebra
        .basis()
        .iter()
        .map(|b| embed(b, &code_indices.natural, ambient))
        .collect();
    let channel = SchurChannel::new(cp);
    let verdict = channel.private_check(&basis, PrivacyMode::General)?;
    transcript.push(CheckRecord {
        check: "apply_image",
        pass: verdict.is_private,
        max_residual: verdict.max_residual,
    });

    let mut rho0 = CMat::zeros(ambient, ambient);
    for &j in &code_indices.natural {
        rho0[(j, j)] = C64::new(1.0 / k as f64, 0.0);
    }
    let rho_resid = verdict
        .rho0
        .as_ref()
        .and_then(|r| r.max_abs_diff(&rho0))
        .unwrap_or(f64::INFINITY);
    transcript.push(CheckRecord {
        check: "fixed_state",
        pass: rho_resid <= VERDICT_TOL,
        max_residual: rho_resid,
    });

    let generators = block_algebra
        .basis()
        .iter()
        .map(|b| embed(b, &code_indices.natural, ambient))
        .collect();
    let algebra = MatrixAlgebra::from_orthonormal(ambient, basis, generators);

    Ok(PrivateCodeCertificate {
        base_dim: n,
        power,
        ambient_dim: ambient,
        algebra,
        block_algebra,
        rho0,
        verified: transcript.iter().all(|r| r.pass),
        code_indices,
        identity_indices,
        transcript,
        idle_qubit: power % 2 == 1,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    pub zero_tol: f64,
    pub tol: f64,
    /// Tensor power used for the qubit yield.
    pub power: usize,
    /// Largest strong power tried for the Shannon lower bound.
    pub shannon_kmax: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            zero_tol: DEFAULT_ZERO_TOL,
            tol: DEFAULT_TOL,
            power: 2,
            shannon_kmax: 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShannonBound {
    pub value: f64,
    /// Largest strong power actually evaluated.
    pub max_k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrivacyReport {
    pub dim: usize,
    pub graph: Graph,
    pub unitary_graph: Graph,
    pub components: Vec<Vec<usize>>,
    /// `G_C = K_n`: no tensor power privatises a non-scalar algebra to the
    /// unit.
    pub complete_graph: bool,
    pub independence: Option<IndependentSet>,
    pub shannon: Option<ShannonBound>,
    /// `S_{UG_C}`: every private algebra is quasiorthogonal to it.
    pub necessary_algebra: MatrixAlgebra,
    /// `S_{G_C*}`: quasiorthogonality to it implies privacy.
    pub sufficient_algebra: MatrixAlgebra,
    /// The two algebras coincide, so they characterise privacy exactly.
    pub characterization_complete: bool,
    pub power: usize,
    /// Qubits privatised by `Φ^{⊗power}` through the tensor-power
    /// construction.
    pub qubit_yield: usize,
    pub fragile_entries: Vec<(usize, usize)>,
}

impl PrivacyReport {
    pub fn summary(&self) -> String {
        if self.complete_graph && self.dim > 1 {
            String::from(
                "complete graph: no non-scalar privatisation to the unit at any tensor power",
            )
        } else if self.components.len() >= 2 {
            format!(
                "{} components: Φ^⊗{} privatises {} qubit(s)",
                self.components.len(),
                self.power,
                self.qubit_yield
            )
        } else {
            String::from("connected graph: the tensor-power construction does not apply")
        }
    }
}

pub fn privacy_report(c: &CorrelationMatrix, opts: &ReportOptions) -> PrivacyReport {
    let graph = c.graph_of(opts.zero_tol);
    let unitary_graph = c.unitary_graph_of(opts.tol);
    let components = graph.connected_components();
    let n = c.dim();

    let independence = graph.independence_number().ok();
    let mut shannon = None;
    let mut power_graph = graph.clone();
    for k in 1..=opts.shannon_kmax.max(1) {
        if k > 1 {
            match power_graph.strong_product_capped(&graph, SEARCH_CAP) {
                Ok(p) => power_graph = p,
                Err(_) => break,
            }
        }
        let Ok(a) = power_graph.independence_number() else { break };
        let value = libm::pow(a.size as f64, 1.0 / k as f64);
        let best = shannon.map_or(value, |s: ShannonBound| s.value.max(value));
        shannon = Some(ShannonBound { value: best, max_k: k });
    }

    let necessary_algebra = opsystem_algebra(&unitary_graph);
    let sufficient_algebra = opsystem_algebra(&graph);
    let characterization_complete = unitary_graph == graph.star_closure();
    let qubit_yield = if components.len() >= 2 { opts.power / 2 } else { 0 };

    PrivacyReport {
        dim: n,
        complete_graph: graph == Graph::complete(n),
        fragile_entries: c.fragile_entries(opts.tol),
        graph,
        unitary_graph,
        components,
        independence,
        shannon,
        necessary_algebra,
        sufficient_algebra,
        characterization_complete,
        power: opts.power,
        qubit_yield,
    }
}

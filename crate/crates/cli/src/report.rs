//! Command pipelines. Each command builds one serializable report; the text
//! form prints the same numbers with the same formatting as the JSON form.

use std::fmt::Write as _;
use std::path::PathBuf;

use schur_privacy::algebras::{opsystem_algebra, quasiorthogonality_defect, SEPARATING_TRIALS};
use schur_privacy::codegen::{privacy_report, private_code_tensor_power_with, ReportOptions};
use schur_privacy::{
    CorrelationMatrix, Error, MatrixAlgebra, PrivacyMode, SchurChannel, VERDICT_TOL,
};
use serde::Serialize;

use crate::formats::{self, CertificateOut, GraphFile, MatrixOut};
use crate::{read, Cli, CliError, Format, EXIT_NOT_PRIVATE, EXIT_OK};

/// Shortest round-trip form, identical to what the JSON writer emits.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

fn set(vs: &[usize]) -> String {
    let inner: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn edges(g: &GraphFile) -> String {
    if g.edges.is_empty() {
        return "none".into();
    }
    g.edges.iter().map(|[i, j]| format!("{i}-{j}")).collect::<Vec<_>>().join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl FnOnce(&T) -> String) -> String {
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => text(value),
    }
}

fn load(cli: &Cli, input: &PathBuf) -> Result<CorrelationMatrix, CliError> {
    let text = read(input)?;
    formats::parse_correlation(&text, &input.display().to_string(), cli.tol)
}

#[derive(Serialize)]
struct IndependenceOut {
    size: usize,
    witness: Vec<usize>,
}

#[derive(Serialize)]
struct ShannonOut {
    value: f64,
    max_k: usize,
}

#[derive(Serialize)]
struct AnalyzeOut {
    dim: usize,
    graph: GraphFile,
    unitary_graph: GraphFile,
    components: Vec<Vec<usize>>,
    complete_graph: bool,
    independence: Option<IndependenceOut>,
    shannon_lower_bound: Option<ShannonOut>,
    necessary_algebra_dim: usize,
    sufficient_algebra_dim: usize,
    characterization_complete: bool,
    power: usize,
    qubit_yield: usize,
    fragile_entries: Vec<[usize; 2]>,
    summary: String,
}

pub fn analyze(cli: &Cli, input: &PathBuf, power: usize) -> Result<(String, i32), CliError> {
    let c = load(cli, input)?;
    let opts = ReportOptions {
        zero_tol: cli.zero_tol,
        tol: cli.tol,
        power,
        ..ReportOptions::default()
    };
    let r = privacy_report(&c, &opts);
    let out = AnalyzeOut {
        dim: r.dim,
        graph: (&r.graph).into(),
        unitary_graph: (&r.unitary_graph).into(),
        components: r.components.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect(),
        complete_graph: r.complete_graph,
        independence: r.independence.as_ref().map(|a| IndependenceOut {
            size: a.size,
            witness: a.vertices.iter().map(|v| v + 1).collect(),
        }),
        shannon_lower_bound: r.shannon.map(|s| ShannonOut {
            value: s.value,
            max_k: s.max_k,
        }),
        necessary_algebra_dim: r.necessary_algebra.dim(),
        sufficient_algebra_dim: r.sufficient_algebra.dim(),
        characterization_complete: r.characterization_complete,
        power: r.power,
        qubit_yield: r.qubit_yield,
        fragile_entries: r.fragile_entries.iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        summary: r.summary(),
    };
    let text = emit(cli, &out, |o| {
        let mut s = String::new();
        let _ = writeln!(s, "dimension: {}", o.dim);
        let _ = writeln!(s, "G_C on {} vertices, edges: {}", o.graph.n, edges(&o.graph));
        let _ = writeln!(s, "UG_C on {} vertices, edges: {}", o.unitary_graph.n, edges(&o.unitary_graph));
        let comps: Vec<String> = o.components.iter().map(|c| set(c)).collect();
        let _ = writeln!(s, "components: {}", comps.join(" "));
        let _ = writeln!(s, "complete graph: {}", yes(o.complete_graph));
        match &o.independence {
            Some(a) => {
                let _ = writeln!(s, "independence number: {}, witness {}", a.size, set(&a.witness));
            }
            None => {
                let _ = writeln!(s, "independence number: not computed (graph above the search cap)");
            }
        }
        if let Some(b) = &o.shannon_lower_bound {
            let _ = writeln!(s, "Shannon capacity lower bound: {} (strong powers k <= {})", num(b.value), b.max_k);
        }
        let _ = writeln!(s, "necessary algebra S_UG_C: dimension {}", o.necessary_algebra_dim);
        let _ = writeln!(s, "sufficient algebra S_G*: dimension {}", o.sufficient_algebra_dim);
        let _ = writeln!(s, "characterization complete: {}", yes(o.characterization_complete));
        let _ = writeln!(s, "tensor power {}: qubit yield {}", o.power, o.qubit_yield);
        if o.fragile_entries.is_empty() {
            let _ = writeln!(s, "fragile entries: none");
        } else {
            let f: Vec<String> = o.fragile_entries.iter().map(|[i, j]| format!("({i},{j})")).collect();
            let _ = writeln!(s, "fragile entries (|C_ij|^2 near 1): {}", f.join(" "));
        }
        let _ = writeln!(s, "summary: {}", o.summary);
        s
    });
    Ok((text, EXIT_OK))
}

pub fn construct(cli: &Cli, input: &PathBuf, power: usize) -> Result<(String, i32), CliError> {
    let c = load(cli, input)?;
    let cert = private_code_tensor_power_with(&c, power, cli.zero_tol)?;
    let out = CertificateOut::from(&cert);
    let code = if cert.verified { EXIT_OK } else { EXIT_NOT_PRIVATE };
    let text = emit(cli, &out, |o| {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "certificate for tensor power {} of a {}-dimensional channel ({}x{} ambient)",
            o.power, o.base_dim, o.ambient_dim, o.ambient_dim
        );
        let _ = writeln!(s, "verified: {}", yes(o.verified));
        let _ = writeln!(s, "algebra dimension: {}", o.algebra_dim);
        let _ = writeln!(s, "identity indices (natural): {}", set(&o.identity_indices.natural));
        let _ = writeln!(s, "identity indices (block order): {}", set(&o.identity_indices.block_order));
        let _ = writeln!(s, "code indices (natural): {}", set(&o.code_indices.natural));
        let _ = writeln!(s, "code indices (block order): {}", set(&o.code_indices.block_order));
        let k = o.code_indices.natural.len();
        let _ = writeln!(s, "rho0 = P/{k} on the code indices");
        if o.idle_qubit {
            let _ = writeln!(s, "odd power: one qubit of the code block is an idle identity factor");
        }
        let _ = writeln!(s, "unital form: {}", o.unital_description);
        for r in &o.transcript {
            let _ = writeln!(
                s,
                "  {:<18} {}  max residual {}",
                r.check,
                if r.pass { "pass" } else { "FAIL" },
                num(r.max_residual)
            );
        }
        s
    });
    Ok((text, code))
}

#[derive(Serialize)]
struct FailureOut {
    basis_index: usize,
    residual: f64,
}

#[derive(Serialize)]
struct DiagnosticsOut {
    quasiorthogonal_to_diagonal: bool,
    diagonal_defect: f64,
    quasiorthogonal_to_unitary_opsystem: bool,
    unitary_opsystem_defect: f64,
    separating_vector: bool,
    /// A negative answer only means no vector was found in the trials.
    separating_vector_probabilistic: bool,
    seed: u64,
}

#[derive(Serialize)]
struct VerifyOut {
    dim: usize,
    span_size: usize,
    closed: bool,
    algebra_dim: usize,
    declared_unital: Option<bool>,
    contains_identity: bool,
    private: bool,
    private_to_unit: bool,
    structural: Option<bool>,
    rho0: Option<MatrixOut>,
    max_residual: f64,
    failure: Option<FailureOut>,
    diagnostics: DiagnosticsOut,
}

pub fn verify(cli: &Cli, input: &PathBuf, algebra: &PathBuf) -> Result<(String, i32), CliError> {
    let c = load(cli, input)?;
    let path = algebra.display().to_string();
    let span = formats::parse_algebra(&read(algebra)?, &path)?;
    let n = c.dim();
    if let Some(b) = span.basis.iter().find(|b| b.shape() != (n, n)) {
        return Err(CliError::Parse {
            path,
            msg: format!(
                "ambient dimension mismatch: algebra element is {}x{}, channel acts on {n}x{n}",
                b.rows(),
                b.cols()
            ),
        });
    }
    let basis = &span.basis;
    let phi = SchurChannel::new(c.clone());

    let general = match phi.private_check(basis, PrivacyMode::General) {
        Ok(v) => Some(v),
        Err(Error::DegenerateUnit(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let unit = phi.private_check(basis, PrivacyMode::Unit)?;
    let verdict = match &general {
        Some(g) if g.is_private || !unit.is_private => g,
        _ => &unit,
    };

    let (closed, alg) = match MatrixAlgebra::from_basis(basis) {
        Ok(a) => (true, a),
        Err(_) => (false, MatrixAlgebra::generate(basis, false)?),
    };
    let diagonal_defect = quasiorthogonality_defect(basis, MatrixAlgebra::diagonal(n).basis())?;
    let ug = opsystem_algebra(&c.unitary_graph_of(cli.tol));
    let unitary_defect = quasiorthogonality_defect(basis, ug.basis())?;
    let sep = alg.has_separating_vector(SEPARATING_TRIALS, cli.seed);

    let out = VerifyOut {
        dim: n,
        span_size: basis.len(),
        closed,
        algebra_dim: alg.dim(),
        declared_unital: span.declared_unital,
        contains_identity: alg.is_unital(),
        private: verdict.is_private,
        private_to_unit: unit.is_private,
        structural: unit.structural,
        rho0: verdict.rho0.as_ref().map(MatrixOut::from),
        max_residual: verdict.max_residual,
        failure: verdict.failure.as_ref().map(|f| FailureOut {
            basis_index: f.index + 1,
            residual: f.residual,
        }),
        diagnostics: DiagnosticsOut {
            quasiorthogonal_to_diagonal: diagonal_defect <= VERDICT_TOL,
            diagonal_defect,
            quasiorthogonal_to_unitary_opsystem: unitary_defect <= VERDICT_TOL,
            unitary_opsystem_defect: unitary_defect,
            separating_vector: sep,
            separating_vector_probabilistic: !sep,
            seed: cli.seed,
        },
    };
    let code = if out.private { EXIT_OK } else { EXIT_NOT_PRIVATE };
    let text = emit(cli, &out, |o| {
        let mut s = String::new();
        let _ = writeln!(s, "channel dimension: {}", o.dim);
        let _ = writeln!(
            s,
            "span of {} element(s); closed under products: {}; generated algebra dimension {}",
            o.span_size,
            yes(o.closed),
            o.algebra_dim
        );
        if let Some(u) = o.declared_unital {
            let _ = writeln!(s, "declared unital: {}", yes(u));
        }
        let _ = writeln!(s, "contains identity: {}", yes(o.contains_identity));
        let _ = writeln!(s, "private: {}", yes(o.private));
        let _ = writeln!(s, "private to the unit: {}", yes(o.private_to_unit));
        if let Some(st) = o.structural {
            let _ = writeln!(s, "structural test (constant diagonal, b_ij C_ij = 0): {}", yes(st));
        }
        if let Some(r) = &o.rho0 {
            let _ = writeln!(s, "rho0:");
            for row in &r.data {
                let cells: Vec<String> = row.iter().map(|[re, im]| format!("{}{}i", num(*re), ImNum(*im))).collect();
                let _ = writeln!(s, "  {}", cells.join("  "));
            }
        }
        let _ = writeln!(s, "max residual: {}", num(o.max_residual));
        if let Some(f) = &o.failure {
            let _ = writeln!(s, "first failing basis element: {} (residual {})", f.basis_index, num(f.residual));
        }
        let d = &o.diagnostics;
        let _ = writeln!(
            s,
            "quasiorthogonal to the diagonal algebra: {} (defect {})",
            yes(d.quasiorthogonal_to_diagonal),
            num(d.diagonal_defect)
        );
        let _ = writeln!(
            s,
            "quasiorthogonal to S_UG_C: {} (defect {})",
            yes(d.quasiorthogonal_to_unitary_opsystem),
            num(d.unitary_opsystem_defect)
        );
        let _ = writeln!(
            s,
            "separating vector: {}{} (seed {})",
            yes(d.separating_vector),
            if d.separating_vector_probabilistic { ", probabilistic" } else { "" },
            d.seed
        );
        s
    });
    Ok((text, code))
}

/// Imaginary part with an explicit sign, in the JSON number form.
struct ImNum(f64);

impl std::fmt::Display for ImNum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = num(self.0);
        if s.starts_with('-') {
            f.write_str(&s)
        } else {
            write!(f, "+{s}")
        }
    }
}

#[derive(Serialize)]
struct GraphOut {
    graph: GraphFile,
    unitary_graph: GraphFile,
}

pub fn graph(cli: &Cli, input: &PathBuf) -> Result<(String, i32), CliError> {
    let c = load(cli, input)?;
    let out = GraphOut {
        graph: (&c.graph_of(cli.zero_tol)).into(),
        unitary_graph: (&c.unitary_graph_of(cli.tol)).into(),
    };
    let text = emit(cli, &out, |o| {
        format!(
            "G_C on {} vertices, edges: {}\nUG_C on {} vertices, edges: {}\n",
            o.graph.n,
            edges(&o.graph),
            o.unitary_graph.n,
            edges(&o.unitary_graph)
        )
    });
    Ok((text, EXIT_OK))
}

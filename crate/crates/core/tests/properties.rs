mod common;

use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use schur_privacy::algebras::{opsystem_algebra, quasiorthogonal_spans, SEPARATING_TRIALS};
use schur_privacy::cmatrix::{
    hermitian_eigenvalues, invert_permutation, is_psd, kron, permute_sym, principal_submatrix,
    schur, trace_inner, CMat, C64,
};
use schur_privacy::codegen::{
    identity_indices_for, identity_submatrix_indices, paired_pauli_algebra, privacy_report,
    ReportOptions,
};
use schur_privacy::{
    CorrelationMatrix, Error, Graph, MatrixAlgebra, PrivacyMode, SchurChannel, DEFAULT_TOL,
    DEFAULT_ZERO_TOL,
};

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| c(a, b))
}

fn matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec(complex(), n * n).prop_map(move |d| CMat::new(n, n, d).unwrap())
}

fn three_matrices() -> impl Strategy<Value = (CMat, CMat, CMat)> {
    (1usize..5).prop_flat_map(|n| (matrix(n), matrix(n), matrix(n)))
}

fn correlation() -> impl Strategy<Value = CorrelationMatrix> {
    (any::<u64>(), 1usize..=7).prop_map(|(seed, n)| random_correlation(&mut rng(seed), n))
}

fn graph() -> impl Strategy<Value = Graph> {
    (any::<u64>(), 0usize..=9, 0.0..1.0f64).prop_map(|(seed, n, p)| random_graph(&mut rng(seed), n, p))
}

fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng(seed));
    p
}

fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.max_abs_diff(b).is_some_and(|d| d <= tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schur_is_commutative_associative_bilinear((a, b, d) in three_matrices(), s in complex()) {
        prop_assert_eq!(schur(&a, &b).unwrap(), schur(&b, &a).unwrap());
        let l = schur(&schur(&a, &b).unwrap(), &d).unwrap();
        let r = schur(&a, &schur(&b, &d).unwrap()).unwrap();
        prop_assert!(close(&l, &r, 1e-12));
        let lin = schur(&a.scale(s).add(&b).unwrap(), &d).unwrap();
        let sep = schur(&a, &d).unwrap().scale(s).add(&schur(&b, &d).unwrap()).unwrap();
        prop_assert!(close(&lin, &sep, 1e-12));
    }

    #[test]
    fn kron_zero_pattern_and_trace((a, b, _) in three_matrices()) {
        let k = kron(&a, &b).unwrap();
        let (p, q) = (b.rows(), b.cols());
        for i in 0..k.rows() {
            for j in 0..k.cols() {
                let zero = a[(i / p, j / q)] == c(0.0, 0.0) || b[(i % p, j % q)] == c(0.0, 0.0);
                if zero {
                    prop_assert_eq!(k[(i, j)], c(0.0, 0.0));
                }
            }
        }
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() <= 1e-10);
    }

    #[test]
    fn trace_inner_is_conjugate_symmetric_and_positive((a, b, _) in three_matrices()) {
        let ab = trace_inner(&a, &b).unwrap();
        let ba = trace_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-10);
        let aa = trace_inner(&a, &a).unwrap();
        prop_assert!(aa.re >= 0.0 && aa.im.abs() <= 1e-12);
        prop_assert!((aa.re - a.frobenius_norm().powi(2)).abs() <= 1e-10);
    }

    #[test]
    fn permute_sym_preserves_spectrum(corr in correlation(), seed in any::<u64>()) {
        let m = corr.matrix();
        let perm = permutation(m.rows(), seed);
        let p = permute_sym(m, &perm).unwrap();
        prop_assert!(is_psd(&p, DEFAULT_TOL).unwrap());
        prop_assert!((p.trace() - m.trace()).norm() <= 1e-12);
        let (e1, e2) = (hermitian_eigenvalues(m).unwrap(), hermitian_eigenvalues(&p).unwrap());
        for (x, y) in e1.iter().zip(&e2) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
        let back = permute_sym(&p, &invert_permutation(&perm).unwrap()).unwrap();
        prop_assert_eq!(&back, m);
    }

    #[test]
    fn alpha_matches_exhaustive_search(g in graph()) {
        let got = g.independence_number().unwrap();
        let (size, witness) = brute_force_alpha(&g);
        prop_assert_eq!(got.size, size);
        prop_assert_eq!(got.vertices, witness);
    }

    #[test]
    fn alpha_is_supermultiplicative(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=5, p in 0.0..1.0f64) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p);
        let h = random_graph(&mut r, m, p);
        let a = g.independence_number().unwrap().size;
        let b = h.independence_number().unwrap().size;
        let gh = g.strong_product(&h).unwrap().independence_number().unwrap();
        prop_assert!(gh.size >= a * b);
        let prod = g.strong_product(&h).unwrap();
        prop_assert!(prod.is_independent(&gh.vertices));
    }

    #[test]
    fn components_of_strong_products(g in graph(), seed in any::<u64>()) {
        let h = random_graph(&mut rng(seed), 4, 0.4);
        let k = g.strong_product(&h).unwrap();
        let want = g.connected_components().len() * h.connected_components().len();
        prop_assert_eq!(k.connected_components().len(), want);
        prop_assert_eq!(k.star_closure(), g.star_closure().strong_product(&h.star_closure()).unwrap());
    }

    #[test]
    fn graph_of_kron_is_strong_product(corr in correlation(), other in correlation()) {
        let k = kron(corr.matrix(), other.matrix()).unwrap();
        let kc = CorrelationMatrix::validate(k, DEFAULT_TOL).unwrap();
        let g = corr.graph_of(DEFAULT_ZERO_TOL).strong_product(&other.graph_of(DEFAULT_ZERO_TOL)).unwrap();
        prop_assert_eq!(kc.graph_of(DEFAULT_ZERO_TOL), g);
    }

    #[test]
    fn correlation_invariants(corr in correlation()) {
        let m = corr.matrix();
        let n = corr.dim();
        for k in 0..n {
            prop_assert_eq!(m[(k, k)], c(1.0, 0.0));
        }
        prop_assert!(m.is_hermitian(0.0));
        for i in 0..n {
            for j in 0..n {
                prop_assert!(m[(i, j)].norm() <= 1.0 + 1e-9);
            }
        }
        let ug = corr.unitary_graph_of(DEFAULT_TOL);
        prop_assert!(ug.is_disjoint_cliques());
        for (i, j) in ug.edges() {
            prop_assert!(corr.graph_of(DEFAULT_ZERO_TOL).has_edge(i, j));
        }
        let bp = corr.block_permutation(DEFAULT_ZERO_TOL);
        let p = permute_sym(m, &bp.perm).unwrap();
        let mut start = 0;
        let mut label = vec![0; n];
        for (b, &s) in bp.sizes.iter().enumerate() {
            label[start..start + s].fill(b);
            start += s;
        }
        for i in 0..n {
            for j in 0..n {
                if label[i] != label[j] {
                    prop_assert!(p[(i, j)].norm() <= DEFAULT_ZERO_TOL);
                }
            }
        }
    }

    #[test]
    fn principal_submatrices_stay_correlations(corr in correlation(), mask in any::<u32>()) {
        let n = corr.dim();
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!idx.is_empty());
        let sub = principal_submatrix(corr.matrix(), &idx).unwrap();
        prop_assert!(CorrelationMatrix::validate(sub, DEFAULT_TOL).is_ok());
    }

    #[test]
    fn kraus_diagonals_give_correlations(seed in any::<u64>(), n in 1usize..=6, r in 1usize..=4) {
        use rand::Rng;
        let mut g = rng(seed);
        let mut diags: Vec<Vec<C64>> = (0..r).map(|_| (0..n).map(|_| c(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0))).collect()).collect();
        for k in 0..n {
            let norm = diags.iter().map(|d| d[k].norm_sqr()).sum::<f64>().sqrt();
            prop_assume!(norm > 1e-3);
            for d in &mut diags {
                d[k] /= norm;
            }
        }
        let corr = CorrelationMatrix::from_diagonal_kraus(&diags, DEFAULT_TOL).unwrap();
        // Φ(ρ) = Σ K ρ K* with K = diag(d)
        let rho = CMat::from_fn(n, n, |i, j| c((i + 2 * j) as f64, i as f64 - j as f64));
        let phi = SchurChannel::new(corr).apply(&rho).unwrap();
        let mut kraus = CMat::zeros(n, n);
        for d in &diags {
            let k = CMat::diag(d);
            kraus = kraus.add(&k.matmul(&rho).unwrap().matmul(&k.adjoint()).unwrap()).unwrap();
        }
        prop_assert!(close(&phi, &kraus, 1e-9));
    }

    #[test]
    fn adjoint_identity(corr in correlation(), seed in any::<u64>()) {
        use rand::Rng;
        let n = corr.dim();
        let mut g = rng(seed);
        let mut rnd = || CMat::from_fn(n, n, |_, _| c(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)));
        let (x, rho) = (rnd(), rnd());
        let phi = SchurChannel::new(corr);
        let l = trace_inner(&x, &phi.apply(&rho).unwrap()).unwrap();
        let r = trace_inner(&phi.adjoint_apply(&x).unwrap(), &rho).unwrap();
        prop_assert!((l - r).norm() <= 1e-10);
        // unital and trace preserving
        prop_assert!((phi.apply(&rho).unwrap().trace() - rho.trace()).norm() <= 1e-12);
        prop_assert_eq!(phi.apply(&CMat::identity(n)).unwrap(), CMat::identity(n));
    }

    #[test]
    fn unitary_pattern_is_fixed(corr in correlation()) {
        let n = corr.dim();
        let phi = SchurChannel::new(corr);
        for (i, j) in phi.unitary_pattern(DEFAULT_TOL) {
            let e = CMat::unit(n, i, j);
            let back = phi.apply(&phi.adjoint_apply(&e).unwrap()).unwrap();
            prop_assert!(close(&back, &e, 1e-9));
        }
    }

    #[test]
    fn structural_and_numeric_verdicts_agree(corr in correlation(), seed in any::<u64>()) {
        let n = corr.dim();
        let phi = SchurChannel::new(corr);
        let perm = permutation(n, seed);
        let p = CMat::from_fn(n, n, |i, j| if perm[i] == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        for alg in [
            MatrixAlgebra::generate(&[p], true).unwrap(),
            MatrixAlgebra::diagonal(n),
            MatrixAlgebra::scalars(n),
        ] {
            let v = phi.private_check(alg.basis(), PrivacyMode::Unit).unwrap();
            prop_assert_eq!(v.structural, Some(v.is_private));
        }
    }

    #[test]
    fn complete_graph_blocks_non_scalar_privacy(seed in any::<u64>(), n in 2usize..=6) {
        use rand::Rng;
        // all entries nonzero: Gram matrix of vectors with a shared positive coordinate
        let mut g = rng(seed);
        let vs: Vec<Vec<f64>> = (0..n).map(|_| vec![1.0, g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)]).collect();
        let m = CMat::from_fn(n, n, |i, j| {
            let dot: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
            let ni: f64 = vs[i].iter().map(|a| a * a).sum::<f64>().sqrt();
            let nj: f64 = vs[j].iter().map(|a| a * a).sum::<f64>().sqrt();
            c(dot / (ni * nj), 0.0)
        });
        let corr = CorrelationMatrix::validate(m, DEFAULT_TOL).unwrap();
        prop_assert_eq!(corr.graph_of(DEFAULT_ZERO_TOL), Graph::complete(n));
        let phi = SchurChannel::new(corr.clone());
        let alg = MatrixAlgebra::generate(&[shift(n)], true).unwrap();
        prop_assert!(!phi.private_check(alg.basis(), PrivacyMode::Unit).unwrap().is_private);
        prop_assert!(matches!(
            schur_privacy::codegen::private_code_tensor_power(&corr, 2),
            Err(Error::Obstruction)
        ));
    }

    #[test]
    fn generate_is_idempotent(seed in any::<u64>(), n in 1usize..=5) {
        use rand::Rng;
        let mut g = rng(seed);
        let h = CMat::from_fn(n, n, |_, _| if g.gen_bool(0.4) { c(g.gen_range(-1.0..1.0), 0.0) } else { c(0.0, 0.0) });
        prop_assume!(h.max_abs() > 0.0);
        let a = MatrixAlgebra::generate(&[h], true).unwrap();
        prop_assert!(a.is_closed(1e-9));
        let b = MatrixAlgebra::generate(a.basis(), true).unwrap();
        prop_assert_eq!(a.dim(), b.dim());
        prop_assert!(a.same_span(&b, 1e-9));
        prop_assert!(a.center_dimension().unwrap() >= 1);
    }

    #[test]
    fn quasiorthogonality_is_symmetric_and_basis_invariant(seed in any::<u64>(), n in 2usize..=6) {
        let perm = permutation(n, seed);
        let p = CMat::from_fn(n, n, |i, j| if perm[i] == j { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let a = MatrixAlgebra::generate(&[p], true).unwrap();
        let b = MatrixAlgebra::diagonal(n);
        let ab = a.quasiorthogonal(&b).unwrap();
        prop_assert_eq!(ab, b.quasiorthogonal(&a).unwrap());
        // re-express a's basis through an invertible mixing
        let basis = a.basis();
        let mixed: Vec<CMat> = (0..basis.len())
            .map(|k| basis[k].add(&basis[(k + 1) % basis.len()].scale(c(0.5, 0.25))).unwrap())
            .collect();
        prop_assert_eq!(quasiorthogonal_spans(&mixed, b.basis(), 1e-9).unwrap(), ab);
    }

    #[test]
    fn codegen_identity_indices(seed in any::<u64>(), m in 2usize..=3, power in 2usize..=3) {
        let sizes = [1, 2, 3];
        let (corr, layout) = random_blocked_correlation(&mut rng(seed), m, sizes[(seed % 3) as usize]);
        let cp = corr.tensor_power(power).unwrap();
        let idx = identity_indices_for(&corr, power, DEFAULT_ZERO_TOL).unwrap();
        let k = m.pow(power as u32);
        prop_assert_eq!(idx.natural.len(), k);
        let sub = principal_submatrix(cp.matrix(), &idx.natural).unwrap();
        prop_assert!(close(&sub, &CMat::identity(k), 1e-12));
        prop_assert!(layout.iter().all(|b| !b.is_empty()));
        let s = layout[0].len();
        let plain = identity_submatrix_indices(&vec![s; m], power).unwrap();
        prop_assert_eq!(plain.block_order.len(), k);
        prop_assert!(plain.block_order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn qubit_yield_is_monotone(seed in any::<u64>()) {
        let (corr, _) = random_blocked_correlation(&mut rng(seed), 2, 2);
        let mut last = 0;
        for power in 1..=6 {
            let opts = ReportOptions { power, ..ReportOptions::default() };
            let y = privacy_report(&corr, &opts).qubit_yield;
            prop_assert!(y >= last);
            last = y;
        }
    }
}

#[test]
fn psd_agrees_with_principal_minor_oracle() {
    let values = [-1.0, -0.5, 0.0, 0.5, 1.0];
    for n in [2usize, 3] {
        let entries = n * (n + 1) / 2;
        for code in 0..values.len().pow(entries as u32) {
            let m = symmetric_from_code(n, &values, code);
            assert_eq!(
                is_psd(&m, 1e-10).unwrap(),
                psd_by_principal_minors(&m, 1e-10),
                "disagreement on {m:?}"
            );
        }
    }
}

fn fourier(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |j, k| {
        C64::from_polar(s, std::f64::consts::TAU * (j * k) as f64 / n as f64)
    })
}

fn conjugate(alg: &MatrixAlgebra, u: &CMat) -> MatrixAlgebra {
    let basis: Vec<CMat> = alg
        .basis()
        .iter()
        .map(|b| u.matmul(b).unwrap().matmul(&u.adjoint()).unwrap())
        .collect();
    MatrixAlgebra::from_basis(&basis).unwrap()
}

fn ampliation(m: usize, k: usize) -> MatrixAlgebra {
    let gens: Vec<CMat> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| kron(&CMat::identity(m), &CMat::unit(k, i, j)).unwrap())
        .collect();
    MatrixAlgebra::generate(&gens, false).unwrap()
}

// The equivalence holds up to unitary equivalence: Δ_n has a separating
// vector but is not quasiorthogonal to itself, while its Fourier conjugate
// (the circulants) is.
#[test]
fn quasiorthogonal_to_diagonal_vs_separating_vector() {
    // (algebra, has a separating vector by the multiplicity criterion)
    let mut library = vec![
        (MatrixAlgebra::diagonal(3), true),
        (MatrixAlgebra::scalars(4), true),
        (MatrixAlgebra::full(2), false),
        (MatrixAlgebra::generate(&[shift(4)], true).unwrap(), true),
        (paired_pauli_algebra(2).unwrap(), true),
    ];
    for (m, k) in [(2, 2), (3, 2), (2, 3), (1, 2)] {
        library.push((ampliation(m, k), m >= k));
    }
    let mut conjugates = Vec::new();
    for (alg, sep) in &library {
        let n = alg.ambient();
        let u = fourier(n);
        conjugates.push((conjugate(alg, &u), *sep));
    }
    library.extend(conjugates);
    for (alg, sep) in &library {
        let n = alg.ambient();
        assert_eq!(alg.has_separating_vector(SEPARATING_TRIALS, 7), *sep, "n={n}, dim={}", alg.dim());
        if alg.quasiorthogonal(&MatrixAlgebra::diagonal(n)).unwrap() {
            assert!(*sep, "quasiorthogonal algebra without separating vector, n={n}");
        }
    }
    for n in 2..=5 {
        let circ = conjugate(&MatrixAlgebra::diagonal(n), &fourier(n));
        assert!(!MatrixAlgebra::diagonal(n).quasiorthogonal(&MatrixAlgebra::diagonal(n)).unwrap());
        assert!(circ.quasiorthogonal(&MatrixAlgebra::diagonal(n)).unwrap());
    }
    let pp = paired_pauli_algebra(2).unwrap();
    assert!(pp.quasiorthogonal(&MatrixAlgebra::diagonal(4)).unwrap());
}

#[test]
fn separating_vector_rank_matches_elimination() {
    let alg = paired_pauli_algebra(4).unwrap();
    let v = alg.separating_vector(SEPARATING_TRIALS, 3).unwrap();
    let rows: Vec<Vec<C64>> = alg.basis().iter().map(|b| b.mul_vec(&v).unwrap()).collect();
    assert_eq!(rank_by_elimination(&rows, 1e-9), alg.dim());
}

#[test]
fn paired_pauli_properties() {
    for n in 2..=6 {
        let alg = paired_pauli_algebra(n).unwrap();
        assert!(alg.is_unital());
        assert!(alg.constant_diagonal());
        assert!(alg.quasiorthogonal(&MatrixAlgebra::diagonal(1 << n)).unwrap());
        for b in alg.basis() {
            assert!((b.frobenius_norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn opsystem_algebra_of_disjoint_cliques() {
    let g = Graph::complete(3).disjoint_union(&Graph::path(2)).disjoint_union(&Graph::empty(1));
    let a = opsystem_algebra(&g);
    assert_eq!(a.dim(), 9 + 4 + 1);
    assert!(a.is_closed(1e-12));
    assert_eq!(a.center_dimension().unwrap(), 3);
}

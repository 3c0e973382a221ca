mod common;

use common::{assert_close, eigenvalues_by_bisection, overlap_sq, rng};
use entbound::linalg::{
    apply_kraus, fidelity, hermitian_eig, hermitian_eigvals, householder_ql, jacobi, psd_sqrt, trace_distance,
    trace_norm, ComplexMatrix,
};
use entbound::random::{haar_state, random_density_matrix, random_hermitian, random_kraus};
use entbound::states::DensityMatrix;
use entbound::C64;
use proptest::prelude::*;

fn unitarity_defect(v: &ComplexMatrix) -> f64 {
    (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.dim()))
}

#[test]
fn eigenvalues_match_inertia_bisection() {
    let mut r = rng(11);
    for _ in 0..20 {
        let a = random_hermitian(8, &mut r);
        let expected = eigenvalues_by_bisection(&a, 1e-11);
        let got = hermitian_eig(&a).unwrap().values;
        for (g, e) in got.iter().zip(&expected) {
            assert_close(*g, *e, 1e-8, "eigenvalue");
        }
    }
}

#[test]
fn large_route_matches_inertia_bisection() {
    let mut r = rng(12);
    let a = random_hermitian(48, &mut r);
    let expected = eigenvalues_by_bisection(&a, 1e-11);
    for (g, e) in householder_ql(&a).unwrap().values.iter().zip(&expected) {
        assert_close(*g, *e, 1e-8, "eigenvalue");
    }
}

#[test]
fn decomposition_reconstructs_input() {
    let mut r = rng(13);
    for dim in (1..=32).chain([33, 64, 100]) {
        let a = random_hermitian(dim, &mut r);
        let eig = hermitian_eig(&a).unwrap();
        let scale = a.max_abs().max(1.0);
        assert!(eig.reconstruct().max_abs_diff(&a) < 1e-10 * scale * dim as f64, "dim {dim}");
        assert!(unitarity_defect(&eig.vectors) < 1e-10 * dim as f64, "dim {dim}");
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]), "dim {dim}: not descending");
    }
}

#[test]
fn jacobi_and_ql_agree() {
    let mut r = rng(14);
    for dim in [2, 5, 16, 40] {
        let a = random_hermitian(dim, &mut r);
        let j = jacobi(&a).unwrap();
        let q = householder_ql(&a).unwrap();
        for (x, y) in j.values.iter().zip(&q.values) {
            assert_close(*x, *y, 1e-10, "eigenvalue");
        }
        assert!(q.reconstruct().max_abs_diff(&a) < 1e-10 * dim as f64);
        let vals = hermitian_eigvals(&a).unwrap();
        for (x, y) in vals.iter().zip(&q.values) {
            assert_close(*x, *y, 1e-10, "eigenvalues-only route");
        }
    }
}

#[test]
fn degenerate_spectrum() {
    // projector of rank 3 in dimension 40, rotated
    let mut r = rng(15);
    let mut diag = vec![0.0; 40];
    diag[..3].fill(1.0);
    let u = entbound::random::random_unitary(40, &mut r);
    let a = (&(&u * &ComplexMatrix::diagonal(&diag)) * &u.adjoint()).hermitized();
    let eig = hermitian_eig(&a).unwrap();
    for (k, v) in eig.values.iter().enumerate() {
        assert_close(*v, if k < 3 { 1.0 } else { 0.0 }, 1e-10, "projector eigenvalue");
    }
}

#[test]
fn pure_state_distance_and_fidelity() {
    let mut r = rng(16);
    for _ in 0..50 {
        let psi = haar_state(8, &mut r);
        let phi = haar_state(8, &mut r);
        let ov = overlap_sq(&psi, &phi);
        let a = ComplexMatrix::outer(&psi);
        let b = ComplexMatrix::outer(&phi);
        assert_close(trace_distance(&a, &b).unwrap(), (1.0 - ov).sqrt(), 1e-10, "pure trace distance");
        assert_close(fidelity(&a, &b).unwrap(), ov.sqrt(), 1e-7, "pure fidelity");
        let rho = random_density_matrix(3, 8, &mut r).unwrap();
        let f = fidelity(rho.matrix(), &a).unwrap();
        assert_close(f * f, rho.matrix().sandwich(&psi, &psi).re, 1e-9, "pure-mixed fidelity");
    }
}

#[test]
fn trace_distance_is_a_metric() {
    let mut r = rng(17);
    for _ in 0..200 {
        let s: Vec<DensityMatrix> = (0..3).map(|_| random_density_matrix(2, 3, &mut r).unwrap()).collect();
        let d = |i: usize, j: usize| trace_distance(s[i].matrix(), s[j].matrix()).unwrap();
        assert!(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12);
        assert_close(d(0, 1), d(1, 0), 1e-12, "symmetry");
        assert!(d(0, 0) < 1e-12);
        assert!((0.0..=1.0 + 1e-12).contains(&d(0, 1)));
    }
}

#[test]
fn fuchs_van_de_graaf() {
    let mut r = rng(18);
    for k in 0..1000 {
        let n = 1 + k % 3;
        let a = random_density_matrix(n, 1 + k % 4, &mut r).unwrap();
        let b = random_density_matrix(n, 1 + (k / 4) % 4, &mut r).unwrap();
        let d = trace_distance(a.matrix(), b.matrix()).unwrap();
        let f = fidelity(a.matrix(), b.matrix()).unwrap();
        assert!(1.0 - f <= d + 1e-10, "case {k}: 1 - F = {} > D = {d}", 1.0 - f);
        assert!(d <= (1.0 - f * f).sqrt() + 1e-10, "case {k}: D = {d} > sqrt(1 - F^2)");
    }
}

#[test]
fn channels_contract_trace_distance() {
    let mut r = rng(19);
    for k in 0..300 {
        let kraus = random_kraus(4, 1 + k % 4, &mut r).unwrap();
        let a = random_density_matrix(2, 4, &mut r).unwrap();
        let b = random_density_matrix(2, 2, &mut r).unwrap();
        let before = trace_distance(a.matrix(), b.matrix()).unwrap();
        let ea = apply_kraus(a.matrix(), &kraus).unwrap();
        let eb = apply_kraus(b.matrix(), &kraus).unwrap();
        assert_close(ea.trace().re, 1.0, 1e-10, "trace after channel");
        assert!(trace_distance(&ea, &eb).unwrap() <= before + 1e-10);
    }
}

#[test]
fn psd_square_root() {
    let mut r = rng(20);
    for rank in [1, 2, 8] {
        let rho = random_density_matrix(3, rank, &mut r).unwrap();
        let s = psd_sqrt(rho.matrix()).unwrap();
        assert!((&s * &s).max_abs_diff(rho.matrix()) < 1e-10);
        assert!(s.hermitian_deviation() < 1e-12);
    }
}

#[test]
fn trace_norm_of_pauli_like_matrix() {
    let m = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -2.0)],
        vec![C64::new(0.0, 2.0), C64::new(0.0, 0.0)],
    ])
    .unwrap();
    assert_close(trace_norm(&m).unwrap(), 4.0, 1e-14, "trace norm");
}

fn hermitian_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|dim| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |entries| {
            let g = ComplexMatrix::from_fn(dim, |i, j| C64::new(entries[i * dim + j].0, entries[i * dim + j].1));
            (&g + &g.adjoint()).scale(0.5)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstruction_holds(a in hermitian_strategy(12)) {
        let eig = hermitian_eig(&a).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a) < 1e-10);
        let trace: f64 = eig.values.iter().sum();
        prop_assert!((trace - a.trace().re).abs() < 1e-10);
    }

    #[test]
    fn both_solvers_agree(a in hermitian_strategy(10)) {
        let j = jacobi(&a).unwrap().values;
        let q = householder_ql(&a).unwrap().values;
        for (x, y) in j.iter().zip(&q) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }
}

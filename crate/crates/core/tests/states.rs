mod common;

use common::{assert_close, rng};
use entbound::io::{LoadedState, StateFile};
use entbound::linalg::{apply_kraus, ComplexMatrix};
use entbound::random::{random_density_matrix, random_xstate};
use entbound::states::{
    apply_noise, dense_to_xstate, dephasing_kraus, ghz_diagonal, ghz_state, ghz_vector, ghz_xstate, Channel,
    DensityMatrix, GhzWeight, XState,
};
use entbound::{Error, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn ghz_builders_agree() {
    for n in 2..=6 {
        for theta in [0.0, 0.3, std::f64::consts::FRAC_PI_4, 1.2] {
            let w = GhzWeight::new(theta).unwrap();
            let dense = ghz_state(n, w).unwrap();
            let compact = ghz_xstate(n, w).unwrap().to_dense().unwrap();
            assert!(dense.matrix().max_abs_diff(compact.matrix()) < 1e-15);
            let psi = ghz_vector(n, w).unwrap();
            assert_close(psi[0].re, theta.cos(), 1e-15, "first amplitude");
            assert_close(psi[(1 << n) - 1].re, theta.sin(), 1e-15, "last amplitude");
        }
    }
    assert!(GhzWeight::new(2.0).is_err());
    assert!(ghz_state(11, GhzWeight::balanced()).is_err());
    assert!(ghz_xstate(24, GhzWeight::balanced()).is_ok());
}

#[test]
fn dense_validation() {
    let bad_trace = ComplexMatrix::diagonal(&[0.5, 0.4]);
    assert!(DensityMatrix::new(bad_trace).is_err());
    let negative = ComplexMatrix::diagonal(&[1.2, -0.2]);
    assert!(matches!(DensityMatrix::new(negative), Err(Error::NotPsd { .. })));
    let mut skew = ComplexMatrix::diagonal(&[0.5, 0.5]);
    skew[(0, 1)] = c(0.1, 0.0);
    assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian { .. })));
    let not_qubits = ComplexMatrix::diagonal(&[0.5, 0.25, 0.25]);
    assert!(DensityMatrix::new(not_qubits).is_err());
}

#[test]
fn xstate_validation() {
    // |z_1|^2 > a1 b1
    assert!(XState::new(2, 0.3, 0.3, vec![0.2], vec![c(0.31, 0.0), c(0.0, 0.0)]).is_err());
    // |z_2| > b_2
    assert!(XState::new(2, 0.3, 0.3, vec![0.2], vec![c(0.1, 0.0), c(0.0, 0.21)]).is_err());
    // trace
    assert!(XState::new(2, 0.3, 0.3, vec![0.3], vec![c(0.0, 0.0); 2]).is_err());
    // wrong number of pairs
    assert!(XState::new(3, 0.3, 0.3, vec![0.2], vec![c(0.0, 0.0); 2]).is_err());
    // boundary accepted
    assert!(XState::new(2, 0.3, 0.3, vec![0.2], vec![c(0.3, 0.0), c(0.0, 0.2)]).is_ok());
}

#[test]
fn non_x_entries_are_reported() {
    let mut m = ghz_state(3, GhzWeight::balanced()).unwrap().into_matrix();
    m = &m.scale(0.5) + &ComplexMatrix::identity(8).scale(0.5 / 8.0);
    m[(1, 2)] = c(0.01, 0.0);
    m[(2, 1)] = c(0.01, 0.0);
    m[(0, 3)] = c(0.0, 0.02);
    m[(3, 0)] = c(0.0, -0.02);
    let rho = DensityMatrix::new(m).unwrap();
    match dense_to_xstate(&rho) {
        Err(Error::NotXState { row, col, modulus }) => {
            assert_eq!((row, col), (1, 4));
            assert_close(modulus, 0.02, 1e-15, "offending modulus");
        }
        other => panic!("expected NotXState, got {other:?}"),
    }
}

#[test]
fn unequal_pair_populations_are_rejected() {
    let m = ComplexMatrix::diagonal(&[0.25, 0.3, 0.2, 0.25]);
    let rho = DensityMatrix::new(m).unwrap();
    assert!(matches!(dense_to_xstate(&rho), Err(Error::UnequalPairPopulations { pair: 2, .. })));
}

#[test]
fn canonicalization_moves_the_dominant_pair() {
    // N = 3, pair 3 (rows 2 and 5) holds the largest coherence
    let x = XState::new(3, 0.2, 0.2, vec![0.1, 0.15, 0.05], vec![c(0.05, 0.0), c(0.02, 0.0), c(0.0, 0.14), c(0.0, 0.0)])
        .unwrap();
    assert!(!x.is_canonical());
    assert_eq!(x.dominant_pair(), 3);
    let y = x.canonicalize().unwrap();
    assert!(y.is_canonical());
    assert_eq!(y.relabel_mask(), 2);
    assert_eq!(y.z1(), c(0.0, 0.14));
    assert_close(y.a1(), 0.15, 1e-15, "moved population");
    assert_close(y.b()[1], 0.2, 1e-15, "old corner population");
    // the permutation is a local unitary: same spectrum
    let ex = entbound::linalg::hermitian_eigvals(x.to_dense().unwrap().matrix()).unwrap();
    let ey = entbound::linalg::hermitian_eigvals(y.to_dense().unwrap().matrix()).unwrap();
    for (a, b) in ex.iter().zip(&ey) {
        assert_close(*a, *b, 1e-12, "spectrum");
    }
    // and the inverse relabel returns the input
    assert_eq!(y.relabel(2).unwrap().z(), x.z());

    let lopsided =
        XState::new(2, 0.4, 0.2, vec![0.2], vec![c(0.01, 0.0), c(0.1, 0.0)]).unwrap();
    assert!(matches!(lopsided.canonicalize(), Err(Error::NotCanonicalizable { .. })));
}

#[test]
fn dense_and_compact_noise_agree() {
    let mut r = rng(31);
    for n in 2..=5 {
        for _ in 0..10 {
            let x = random_xstate(n, &mut r).unwrap();
            for ch in [Channel::Depolarizing(0.37), Channel::Dephasing(0.21), Channel::Dephasing(1.0)] {
                let compact = x.apply_noise(ch).unwrap().to_dense().unwrap();
                let dense = apply_noise(&x.to_dense().unwrap(), ch).unwrap();
                assert!(compact.matrix().max_abs_diff(dense.matrix()) < 1e-15, "{ch:?}");
            }
        }
    }
    assert!(ghz_xstate(2, GhzWeight::balanced()).unwrap().apply_noise(Channel::Depolarizing(1.5)).is_err());
}

#[test]
fn dephasing_matches_its_kraus_form() {
    let mut r = rng(32);
    for n in 1..=4 {
        let rho = random_density_matrix(n, 3, &mut r).unwrap();
        let kraus = dephasing_kraus(n, 0.4).unwrap();
        assert!(entbound::linalg::kraus_completeness_deviation(&kraus) < 1e-14);
        let via_kraus = apply_kraus(rho.matrix(), &kraus).unwrap();
        let direct = apply_noise(&rho, Channel::Dephasing(0.4)).unwrap();
        assert!(via_kraus.max_abs_diff(direct.matrix()) < 1e-14);
    }
}

#[test]
fn ghz_diagonal_weights() {
    // all weight on the + state of pair 1 is the GHZ state
    let mut w = vec![0.0; 8];
    w[0] = 1.0;
    let x = ghz_diagonal(3, &w).unwrap();
    let g = ghz_xstate(3, GhzWeight::balanced()).unwrap();
    assert!(x.to_dense().unwrap().matrix().max_abs_diff(g.to_dense().unwrap().matrix()) < 1e-15);
    // the - state of pair 2 comes back canonicalized with a negative z1
    let mut w = vec![0.0; 8];
    w[3] = 1.0;
    let x = ghz_diagonal(3, &w).unwrap();
    assert!(x.is_canonical());
    assert_close(x.z1().re, -0.5, 1e-15, "z1");
    assert!(ghz_diagonal(3, &[0.5; 8]).is_err());
    assert!(ghz_diagonal(3, &[0.25; 4]).is_err());
}

#[test]
fn mixtures_and_maximally_mixed() {
    let g = ghz_state(2, GhzWeight::balanced()).unwrap();
    let id = DensityMatrix::maximally_mixed(2).unwrap();
    let m = DensityMatrix::mixture(&[(0.5, &g), (0.5, &id)]).unwrap();
    let expected = apply_noise(&g, Channel::Depolarizing(0.5)).unwrap();
    assert!(m.matrix().max_abs_diff(expected.matrix()) < 1e-15);
    assert!(DensityMatrix::mixture(&[(0.7, &g), (0.7, &id)]).is_err());
}

#[test]
fn files_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(33);
    let x = random_xstate(4, &mut r).unwrap();
    let files = [
        StateFile::from_xstate(&x),
        StateFile::from_dense(&random_density_matrix(2, 2, &mut r).unwrap()),
        StateFile::from_record(3, &entbound::measurement::MeasurementRecord::exact(0.4, 0.35, 0.1, -0.2)),
        StateFile::GhzDiagonal { n_qubits: 2, weights: vec![0.5, 0.1, 0.3, 0.1] },
    ];
    for (k, f) in files.iter().enumerate() {
        let path = dir.path().join(format!("f{k}.json"));
        f.save(&path).unwrap();
        let first = std::fs::read(&path).unwrap();
        let loaded = StateFile::load(&path).unwrap();
        assert_eq!(&loaded, f);
        loaded.save(&path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), first, "{}", f.format_tag());
        loaded.into_state().unwrap();
    }
}

#[test]
fn loader_rejects_instead_of_repairing() {
    let unnormalized = r#"{"format":"xstate","n_qubits":2,"a1":0.5,"b1":0.5,"z1_re":0,"z1_im":0,
        "pairs":[{"b":0.1,"z_re":0,"z_im":0}]}"#;
    assert!(StateFile::parse(unnormalized).unwrap().into_state().is_err());
    let ragged = r#"{"format":"dense","n_qubits":1,"re":[[1,0],[0]],"im":[[0,0],[0,0]]}"#;
    assert!(StateFile::parse(ragged).unwrap().into_state().is_err());
    let record = r#"{"format":"record","n_qubits":2,"p00":0.5,"p11":0.5,"z_re":0.7,"z_im":0}"#;
    assert!(matches!(StateFile::parse(record).unwrap().into_state(), Err(Error::InconsistentRecord(_))));
    let hand_written = r#"{"format":"xstate","n_qubits":1,"a1":0.5,"b1":0.5,"z1_re":0.5,"z1_im":0,"pairs":[]}"#;
    assert!(matches!(StateFile::parse(hand_written).unwrap().into_state().unwrap(), LoadedState::X(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn xstate_dense_round_trip(seed in any::<u64>(), n in 1usize..=6) {
        let x = random_xstate(n, &mut rng(seed)).unwrap();
        let dense = x.to_dense().unwrap();
        let back = dense_to_xstate(&dense).unwrap();
        prop_assert_eq!(back.n_qubits(), n);
        prop_assert!((back.a1() - x.a1()).abs() < 1e-15);
        for (a, b) in back.z().iter().zip(x.z()) {
            prop_assert!((a - b).norm() < 1e-15);
        }
        prop_assert!((dense.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(dense.min_eigenvalue().unwrap() >= -1e-12);
    }

    #[test]
    fn xstate_file_round_trip(seed in any::<u64>(), n in 1usize..=12) {
        let x = random_xstate(n, &mut rng(seed)).unwrap();
        let f = StateFile::from_xstate(&x);
        let json = f.to_json();
        let again = StateFile::parse(&json).unwrap();
        prop_assert_eq!(again.to_json(), json);
        match again.into_state().unwrap() {
            LoadedState::X(y) => prop_assert_eq!(y, x),
            _ => prop_assert!(false, "wrong kind"),
        }
    }
}

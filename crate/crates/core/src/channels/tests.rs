use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::measures::{coherence, coherence_b_given_a};
use crate::qcore::random::{haar_unitary_with, random_mixed, rng_from_seed};
use crate::qcore::{apply_gate, max_abs_diff, tensor, C64};

fn comp2() -> ProductBasis {
    ProductBasis::computational(&[2, 2])
}

fn ket(dims: Vec<usize>, i: usize) -> QState {
    QState::basis_state(dims, i).unwrap()
}

#[test]
fn cz_and_cx_matrices() {
    let cz = make_cz();
    let out = apply_gate(&ket(vec![2, 2], 3), &cz).unwrap();
    assert_eq!(out, ket(vec![2, 2], 3));
    assert_eq!(cz.unitary()[(3, 3)], c(-1.0, 0.0));
    for k in 0..3 {
        assert_eq!(cz.unitary()[(k, k)], c(1.0, 0.0));
    }

    let cx = make_cx();
    for j in 0..2 {
        let out = apply_gate(&ket(vec![2, 2], 2 + j), &cx).unwrap();
        assert_eq!(out, ket(vec![2, 2], 2 + (1 ^ j)));
        let out = apply_gate(&ket(vec![2, 2], j), &cx).unwrap();
        assert_eq!(out, ket(vec![2, 2], j));
    }
}

#[test]
fn generalized_cnot_permutes() {
    let g = make_generalized_cnot(3);
    // |2>|2> -> |2>|1>
    let out = apply_gate(&ket(vec![3, 3], 8), &g).unwrap();
    assert_eq!(out, ket(vec![3, 3], 7));
}

#[test]
fn controlled_u_examples() {
    let g = make_controlled_u(&CMatrix::identity(2, 2)).unwrap();
    assert!(max_abs_diff(g.unitary(), &CMatrix::identity(4, 4)) < 1e-15);
    let z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
    assert!(max_abs_diff(make_controlled_u(&z).unwrap().unitary(), make_cz().unitary()) < 1e-15);
    assert!(matches!(
        make_controlled_u(&(CMatrix::identity(2, 2) * c(0.5, 0.0))),
        Err(Error::NonUnitary { .. })
    ));
}

#[test]
fn kraus_channel_validation() {
    let half = CMatrix::identity(2, 2) * c(0.5, 0.0);
    assert!(matches!(
        KrausChannel::new(vec![half.clone()], vec![2]),
        Err(Error::IncompleteChannel { .. })
    ));
    assert!(KrausChannel::new(vec![CMatrix::identity(3, 3)], vec![2]).is_err());
    let ch = KrausChannel::mixture(&[
        (0.5, KrausChannel::identity(&[2])),
        (0.5, KrausChannel::from_gate(&make_hadamard(), &[2]).unwrap()),
    ])
    .unwrap();
    assert!(ch.completeness_residual() < 1e-12);
    assert!(!ch.is_unitary());
    let comp = ch.then(&ch).unwrap();
    assert_eq!(comp.kraus().len(), 4);
    assert!(comp.completeness_residual() < 1e-12);
}

fn werner(p: f64) -> QState {
    let bell = QState::pure(vec![2, 2], &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
    let m = bell.matrix() * c(p, 0.0) + QState::maximally_mixed(vec![2, 2]).matrix() * c(1.0 - p, 0.0);
    QState::new(vec![2, 2], m).unwrap()
}

#[test]
fn depolarize_mix_examples() {
    let cx = make_cx();
    let unitary = depolarize_mix(&cx, 1.0).unwrap();
    assert!(unitary.is_unitary());

    let constant = depolarize_mix(&cx, 0.0).unwrap();
    let s = random_mixed(vec![2, 2], &mut rng_from_seed(1));
    let out = constant.apply(&s).unwrap();
    assert!(max_abs_diff(out.matrix(), QState::maximally_mixed(vec![2, 2]).matrix()) < 1e-15);

    let plus = QState::pure(vec![2], &[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
    let input = tensor(&plus, &ket(vec![2], 0));
    for p in [0.0, 0.2, 0.3, 1.0 / 3.0, 0.7, 1.0] {
        let out = depolarize_mix(&cx, p).unwrap().apply(&input).unwrap();
        assert!(max_abs_diff(out.matrix(), werner(p).matrix()) < 1e-14, "p = {p}");
    }
    assert!(depolarize_mix(&cx, 1.5).is_err());
    assert!(depolarize_mix(&make_hadamard(), 0.5).is_err());
}

#[test]
fn mio_examples() {
    let mut rng = rng_from_seed(3);
    for _ in 0..5 {
        let u = random_incoherent_unitary(4, &mut rng);
        let ch = KrausChannel::from_gate(&Gate::new(u, vec![0, 1]).unwrap(), &[2, 2]).unwrap();
        assert!(check_mio(&ch, &comp2()).unwrap().passed);
    }

    let h = KrausChannel::from_gate(&make_hadamard(), &[2]).unwrap();
    let out = check_mio(&h, &ProductBasis::computational(&[2])).unwrap();
    assert!(!out.passed);
    match out.witness {
        Some(Witness::Mio { input, max_offdiag }) => {
            assert_eq!(input, 0);
            assert_abs_diff_eq!(max_offdiag, 0.5, epsilon = 1e-12);
        }
        w => panic!("{w:?}"),
    }

    // Oracle: the four outputs of the Werner channel on basis projectors,
    // p CX|i><i|CX + (1-p) I/4, are diagonal by inspection.
    let ch = depolarize_mix(&make_cx(), 0.3).unwrap();
    for i in 0..4 {
        let out = ch.apply(&ket(vec![2, 2], i)).unwrap();
        let perm = [0, 1, 3, 2][i];
        let mut expected = vec![0.7 / 4.0; 4];
        expected[perm] += 0.3;
        let expected = QState::diagonal(vec![2, 2], &expected).unwrap();
        assert!(max_abs_diff(out.matrix(), expected.matrix()) < 1e-15);
    }
    assert!(check_mio(&ch, &comp2()).unwrap().passed);
    assert!(check_mio(&ch, &ProductBasis::computational(&[4])).is_err());
}

#[test]
fn kraus_incoherent_examples() {
    let cz = KrausChannel::from_gate(&make_cz(), &[2, 2]).unwrap();
    assert!(check_kraus_incoherent(&cz, &comp2()).unwrap().passed);
    let cx = KrausChannel::from_gate(&make_cx(), &[2, 2]).unwrap();
    assert!(check_kraus_incoherent(&cx, &comp2()).unwrap().passed);
    let h = KrausChannel::from_gate(&make_hadamard(), &[2]).unwrap();
    let out = check_kraus_incoherent(&h, &ProductBasis::computational(&[2])).unwrap();
    assert!(!out.passed);
    assert_eq!(
        out.witness,
        Some(Witness::Kraus {
            operator: 0,
            column: 0,
            nonzeros: 2
        })
    );
    assert!(
        check_kraus_incoherent(&depolarize_mix(&make_cx(), 0.3).unwrap(), &comp2())
            .unwrap()
            .passed
    );
    assert!(
        check_kraus_incoherent(&partial_dephasing(&[2, 2], &[1], 0.4).unwrap(), &comp2())
            .unwrap()
            .passed
    );
}

#[test]
fn kraus_check_depends_on_basis() {
    // In the Hadamard basis of the target CZ becomes a CNOT, still incoherent;
    // a generic rotation breaks it.
    let cz = KrausChannel::from_gate(&make_cz(), &[2, 2]).unwrap();
    let h = make_hadamard().unitary().clone();
    let b = ProductBasis::new(vec![CMatrix::identity(2, 2), h]).unwrap();
    assert!(check_kraus_incoherent(&cz, &b).unwrap().passed);
    let r = crate::qcore::bloch_basis(0.3, 0.2);
    let b = ProductBasis::new(vec![r.clone(), r]).unwrap();
    assert!(!check_kraus_incoherent(&cz, &b).unwrap().passed);
    assert!(!check_mio(&cz, &b).unwrap().passed);
}

#[test]
fn a_incoherent_examples() {
    let mut rng = rng_from_seed(4);
    // controlled-U with the control in A; any U on B keeps A-blocks apart
    let u = haar_unitary_with(2, &mut rng).unwrap();
    let cu = KrausChannel::from_gate(&make_controlled_u(&u).unwrap(), &[2, 2]).unwrap();
    assert!(check_a_incoherent(&cu, &[0], &comp2()).unwrap().passed);
    let diag_u = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0, 1.0), C64::new(0.6, 0.8)]));
    let cu = KrausChannel::from_gate(&make_controlled_u(&diag_u).unwrap(), &[2, 2]).unwrap();
    assert!(check_a_incoherent(&cu, &[0], &comp2()).unwrap().passed);
    assert!(check_kraus_incoherent(&cu, &comp2()).unwrap().passed);

    let h_on_a = KrausChannel::from_gate(&make_hadamard(), &[2, 2]).unwrap();
    let out = check_a_incoherent(&h_on_a, &[0], &comp2()).unwrap();
    assert!(!out.passed);
    assert!(matches!(out.witness, Some(Witness::AIncoherent { a_index: 0, .. })));

    let on_b = Gate::new(haar_unitary_with(3, &mut rng).unwrap(), vec![1]).unwrap();
    let ch = KrausChannel::from_gate(&on_b, &[2, 3]).unwrap();
    assert!(
        check_a_incoherent(&ch, &[0], &ProductBasis::computational(&[2, 3]))
            .unwrap()
            .passed
    );

    assert!(check_a_incoherent(&ch, &[0, 1], &ProductBasis::computational(&[2, 3])).is_err());
    assert!(check_a_incoherent(&ch, &[], &ProductBasis::computational(&[2, 3])).is_err());
}

#[test]
fn a_incoherent_in_rotated_a_basis() {
    // Controlled-U with the control read in the Hadamard basis passes only
    // when the checker is told about that basis.
    let mut rng = rng_from_seed(9);
    let u = haar_unitary_with(2, &mut rng).unwrap();
    let h = make_hadamard().unitary().clone();
    let cu = make_controlled_u(&u).unwrap().unitary().clone();
    let hh = h.kronecker(&CMatrix::identity(2, 2));
    let rotated = &hh * cu * &hh;
    let ch = KrausChannel::new(vec![rotated], vec![2, 2]).unwrap();
    let b = ProductBasis::new(vec![h, CMatrix::identity(2, 2)]).unwrap();
    assert!(check_a_incoherent(&ch, &[0], &b).unwrap().passed);
    assert!(!check_a_incoherent(&ch, &[0], &comp2()).unwrap().passed);
}

fn sample_channel(seed: u64) -> KrausChannel {
    let mut rng = rng_from_seed(seed);
    let dims = [2, 2];
    match seed % 5 {
        0 => KrausChannel::from_gate(
            &Gate::new(random_incoherent_unitary(4, &mut rng), vec![0, 1]).unwrap(),
            &dims,
        )
        .unwrap(),
        1 => depolarize_mix(&make_cx(), rng.random()).unwrap(),
        2 => partial_dephasing(&dims, &[0], rng.random()).unwrap(),
        3 => KrausChannel::from_gate(&make_hadamard(), &dims).unwrap(),
        _ => KrausChannel::from_gate(
            &Gate::new(haar_unitary_with(4, &mut rng).unwrap(), vec![0, 1]).unwrap(),
            &dims,
        )
        .unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn io_implies_mio_and_monotonicity(seed in any::<u64>()) {
        let ch = sample_channel(seed);
        let b = comp2();
        let io = check_kraus_incoherent(&ch, &b).unwrap().passed;
        let mio = check_mio(&ch, &b).unwrap().passed;
        prop_assert!(!io || mio);
        let rho = random_mixed(vec![2, 2], &mut rng_from_seed(seed ^ 0xfeed));
        let out = ch.apply(&rho).unwrap();
        prop_assert!(out.eigenvalues()[0] > -1e-10);
        if mio {
            prop_assert!(coherence(&out, &b).unwrap() <= coherence(&rho, &b).unwrap() + 1e-9);
        }
        if check_a_incoherent(&ch, &[0], &b).unwrap().passed {
            prop_assert!(coherence_b_given_a(&out, &[0], &b).unwrap() <= coherence_b_given_a(&rho, &[0], &b).unwrap() + 1e-9);
        }
    }
}

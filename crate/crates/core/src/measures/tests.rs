use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

use super::*;
use crate::qcore::random::{haar_unitary_with, random_mixed, random_pure, rng_from_seed};
use crate::qcore::{apply_gate, bloch_basis, c, dephase, rel_entropy, tensor, Gate, C64};

fn amp(re: f64) -> C64 {
    c(re, 0.0)
}

fn plus() -> QState {
    QState::pure(vec![2], &[amp(1.0), amp(1.0)]).unwrap()
}

fn bell() -> QState {
    QState::pure(vec![2, 2], &[amp(1.0), amp(0.0), amp(0.0), amp(1.0)]).unwrap()
}

fn classical() -> QState {
    QState::diagonal(vec![2, 2], &[0.5, 0.0, 0.0, 0.5]).unwrap()
}

fn werner(p: f64) -> QState {
    let m = bell().matrix() * amp(p) + QState::maximally_mixed(vec![2, 2]).matrix() * amp(1.0 - p);
    QState::new(vec![2, 2], m).unwrap()
}

fn h2(x: f64) -> f64 {
    let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    t(x) + t(1.0 - x)
}

fn comp(n: usize) -> ProductBasis {
    ProductBasis::computational(&vec![2; n])
}

/// Literal global discord at a basis: entropies of explicitly dephased
/// states, no pinching shortcut.
fn literal_global_discord(s: &QState, b: &ProductBasis) -> f64 {
    let all: Vec<usize> = (0..s.num_subsystems()).collect();
    let joint = vn_entropy(&dephase(s, b, &all).unwrap()) - vn_entropy(s);
    let local: f64 = all
        .iter()
        .map(|&k| {
            let m = partial_trace(s, &[k]).unwrap();
            vn_entropy(&dephase(&m, &b.restrict(&[k]), &[0]).unwrap()) - vn_entropy(&m)
        })
        .sum();
    joint - local
}

fn literal_asym_discord(s: &QState, b: &ProductBasis) -> f64 {
    let cond = vn_entropy(&dephase(s, b, &[0]).unwrap()) - vn_entropy(s);
    let m = partial_trace(s, &[0]).unwrap();
    cond - (vn_entropy(&dephase(&m, &b.restrict(&[0]), &[0]).unwrap()) - vn_entropy(&m))
}

/// Dense grid over both qubits' (theta, phi) in [0, π/2] x [0, π).
fn grid_oracle(points: usize, eval: impl Fn(&ProductBasis) -> f64) -> f64 {
    let angles: Vec<(f64, f64)> = (0..points)
        .flat_map(|i| {
            (0..points).map(move |j| {
                (
                    i as f64 * FRAC_PI_2 / (points - 1) as f64,
                    j as f64 * PI / points as f64,
                )
            })
        })
        .collect();
    let mut best = f64::INFINITY;
    for &a0 in &angles {
        for &a1 in &angles {
            best = best.min(eval(&ProductBasis::from_angles(&[a0, a1])));
        }
    }
    best
}

fn grid_oracle_first_qubit(points: usize, eval: impl Fn(&ProductBasis) -> f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points {
        for j in 0..points {
            let t = i as f64 * FRAC_PI_2 / (points - 1) as f64;
            let p = j as f64 * PI / points as f64;
            let b = ProductBasis::new(vec![bloch_basis(t, p), CMatrix::identity(2, 2)]).unwrap();
            best = best.min(eval(&b));
        }
    }
    best
}

#[test]
fn coherence_examples() {
    let diag = QState::diagonal(vec![2, 2], &[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert_abs_diff_eq!(coherence(&diag, &comp(2)).unwrap(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(coherence(&plus(), &comp(1)).unwrap(), 1.0, epsilon = 1e-10);
    for theta in [0.1, 0.45, 1.0, 2.5] {
        let s = QState::pure(vec![2], &[amp(f64::cos(theta)), amp(f64::sin(theta))]).unwrap();
        assert_abs_diff_eq!(
            coherence(&s, &comp(1)).unwrap(),
            h2(f64::cos(theta).powi(2)),
            epsilon = 1e-10
        );
    }
    assert!(coherence(&plus(), &comp(2)).is_err());
}

#[test]
fn coherence_matches_relative_entropy_route() {
    let mut rng = rng_from_seed(31);
    for _ in 0..10 {
        let s = random_mixed(vec![2, 3], &mut rng);
        let b = ProductBasis::new(vec![
            haar_unitary_with(2, &mut rng).unwrap(),
            haar_unitary_with(3, &mut rng).unwrap(),
        ])
        .unwrap();
        let direct = rel_entropy(&s, &dephase(&s, &b, &[0, 1]).unwrap())
            .unwrap()
            .finite()
            .unwrap();
        assert_abs_diff_eq!(coherence(&s, &b).unwrap(), direct, epsilon = 1e-9);
        let cond = rel_entropy(&s, &dephase(&s, &b, &[0]).unwrap())
            .unwrap()
            .finite()
            .unwrap();
        assert_abs_diff_eq!(coherence_b_given_a(&s, &[0], &b).unwrap(), cond, epsilon = 1e-9);
    }
}

#[test]
fn conditional_coherence_examples() {
    let mut rng = rng_from_seed(12);
    let b0 = random_mixed(vec![2], &mut rng);
    let b1 = random_mixed(vec![2], &mut rng);
    let zero = QState::basis_state(vec![2], 0).unwrap();
    let one = QState::basis_state(vec![2], 1).unwrap();
    let m = tensor(&zero, &b0).matrix() * amp(0.3) + tensor(&one, &b1).matrix() * amp(0.7);
    let a_incoherent = QState::new(vec![2, 2], m).unwrap();
    assert_abs_diff_eq!(
        coherence_b_given_a(&a_incoherent, &[0], &comp(2)).unwrap(),
        0.0,
        epsilon = 1e-10
    );

    let rho_b = random_mixed(vec![3], &mut rng);
    let s = tensor(&plus(), &rho_b);
    let b = ProductBasis::computational(&[2, 3]);
    assert_abs_diff_eq!(coherence_b_given_a(&s, &[0], &b).unwrap(), 1.0, epsilon = 1e-10);

    assert_abs_diff_eq!(
        coherence_b_given_a(&bell(), &[0], &comp(2)).unwrap(),
        1.0,
        epsilon = 1e-10
    );

    assert!(coherence_b_given_a(&bell(), &[], &comp(2)).is_err());
    assert!(coherence_b_given_a(&bell(), &[0, 1], &comp(2)).is_err());
}

#[test]
fn global_discord_at_examples() {
    let mut rng = rng_from_seed(13);
    let prod = tensor(&random_mixed(vec![2], &mut rng), &random_pure(vec![2], &mut rng));
    for seed in 0..5 {
        let mut r = rng_from_seed(seed);
        let b = ProductBasis::new(vec![
            haar_unitary_with(2, &mut r).unwrap(),
            haar_unitary_with(2, &mut r).unwrap(),
        ])
        .unwrap();
        assert_abs_diff_eq!(global_discord_at(&prod, &b).unwrap(), 0.0, epsilon = 1e-9);
    }
    assert_abs_diff_eq!(global_discord_at(&bell(), &comp(2)).unwrap(), 1.0, epsilon = 1e-10);
    assert_abs_diff_eq!(global_discord_at(&classical(), &comp(2)).unwrap(), 0.0, epsilon = 1e-12);
    assert_eq!(global_discord_at(&plus(), &comp(1)), Err(Error::SingleSubsystem));
}

#[test]
fn global_discord_examples() {
    let cfg = OptimizerConfig::default();
    let r = global_discord(&classical(), &cfg).unwrap();
    assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-9);
    assert!(!r.heuristic);

    let r = global_discord(&bell(), &cfg).unwrap();
    assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
    let oracle = grid_oracle(24, |b| literal_global_discord(&bell(), b));
    assert!(oracle >= 1.0 - 1e-9, "grid found {oracle}");

    let w = werner(0.3);
    let r = global_discord(&w, &cfg).unwrap();
    let oracle = grid_oracle(24, |b| literal_global_discord(&w, b));
    assert!(r.value > 0.01);
    assert!(r.value <= oracle + 1e-9);
    assert!(
        (r.value - oracle).abs() < 5e-3,
        "optimizer {} vs grid {oracle}",
        r.value
    );
}

#[test]
fn minimized_measures_reject_qutrits() {
    let s = QState::maximally_mixed(vec![2, 3]);
    let cfg = OptimizerConfig::default();
    assert_eq!(
        global_discord(&s, &cfg).unwrap_err(),
        Error::UnsupportedDimension { dim: 3 }
    );
    assert_eq!(
        rel_entropy_discord(&s, &cfg).unwrap_err(),
        Error::UnsupportedDimension { dim: 3 }
    );
    assert_eq!(
        asym_discord(&s, &[1], &cfg).unwrap_err(),
        Error::UnsupportedDimension { dim: 3 }
    );
    // A = qubit is fine even when B is a qutrit.
    assert!(asym_discord(&s, &[0], &cfg).is_ok());
}

#[test]
fn candidate_minimization_for_qudits() {
    let mut rng = rng_from_seed(77);
    let s = random_mixed(vec![3, 3], &mut rng);
    let mut candidates = vec![ProductBasis::computational(&[3, 3])];
    for _ in 0..20 {
        candidates.push(
            ProductBasis::new(vec![
                haar_unitary_with(3, &mut rng).unwrap(),
                haar_unitary_with(3, &mut rng).unwrap(),
            ])
            .unwrap(),
        );
    }
    let r = global_discord_over(&s, &candidates).unwrap();
    assert!(r.heuristic);
    assert_eq!(r.evaluations, 21);
    for b in &candidates {
        assert!(r.value <= global_discord_at(&s, b).unwrap());
    }
    let r = rel_entropy_discord_over(&s, &candidates).unwrap();
    assert_abs_diff_eq!(
        r.value,
        coherence(&s, r.argmin_basis.as_ref().unwrap()).unwrap(),
        epsilon = 1e-15
    );
    let r = asym_discord_over(&s, &[0], &candidates).unwrap();
    assert!(r.value <= asym_discord_at(&s, &[0], &candidates[0]).unwrap());
    assert!(global_discord_over(&s, &[]).is_err());
}

#[test]
fn asym_discord_at_examples() {
    let mut rng = rng_from_seed(14);
    let prod = tensor(&random_mixed(vec![2], &mut rng), &random_mixed(vec![2], &mut rng));
    for seed in 0..5 {
        let mut r = rng_from_seed(seed + 100);
        let b = ProductBasis::new(vec![
            haar_unitary_with(2, &mut r).unwrap(),
            haar_unitary_with(2, &mut r).unwrap(),
        ])
        .unwrap();
        assert_abs_diff_eq!(asym_discord_at(&prod, &[0], &b).unwrap(), 0.0, epsilon = 1e-9);
    }
    assert_abs_diff_eq!(asym_discord_at(&bell(), &[0], &comp(2)).unwrap(), 1.0, epsilon = 1e-10);

    let zero = QState::basis_state(vec![2], 0).unwrap();
    let one = QState::basis_state(vec![2], 1).unwrap();
    let m =
        tensor(&zero, &plus()).matrix() * amp(0.4) + tensor(&one, &random_mixed(vec![2], &mut rng)).matrix() * amp(0.6);
    let a_inc = QState::new(vec![2, 2], m).unwrap();
    assert_abs_diff_eq!(asym_discord_at(&a_inc, &[0], &comp(2)).unwrap(), 0.0, epsilon = 1e-10);
}

#[test]
fn asym_discord_examples() {
    let cfg = OptimizerConfig::default();
    let mut rng = rng_from_seed(15);
    let prod = tensor(&random_mixed(vec![2], &mut rng), &random_mixed(vec![2], &mut rng));
    assert_abs_diff_eq!(asym_discord(&prod, &[0], &cfg).unwrap().value, 0.0, epsilon = 1e-9);

    let r = asym_discord(&bell(), &[0], &cfg).unwrap();
    assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
    let oracle = grid_oracle_first_qubit(48, |b| literal_asym_discord(&bell(), b));
    assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-9);

    let w = werner(0.3);
    let a0 = asym_discord(&w, &[0], &cfg).unwrap().value;
    let a1 = asym_discord(&w, &[1], &cfg).unwrap().value;
    let oracle = grid_oracle_first_qubit(48, |b| literal_asym_discord(&w, b));
    assert!(a0 > 0.01);
    assert_abs_diff_eq!(a0, a1, epsilon = 1e-9);
    assert!(a0 <= oracle + 1e-9 && (a0 - oracle).abs() < 5e-3, "{a0} vs {oracle}");
}

#[test]
fn rel_entropy_discord_examples() {
    let cfg = OptimizerConfig::default();
    let inc = QState::diagonal(vec![2, 2], &[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert_abs_diff_eq!(rel_entropy_discord(&inc, &cfg).unwrap().value, 0.0, epsilon = 1e-9);
    let r = rel_entropy_discord(&bell(), &cfg).unwrap();
    assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-9);
    let oracle = grid_oracle(24, |b| {
        vn_entropy(&dephase(&bell(), b, &[0, 1]).unwrap()) - vn_entropy(&bell())
    });
    assert!(oracle >= 1.0 - 1e-9);
    let mut rng = rng_from_seed(16);
    for _ in 0..5 {
        let s = random_mixed(vec![2, 2], &mut rng);
        let r = rel_entropy_discord(&s, &cfg).unwrap();
        assert!(r.value <= coherence(&s, &comp(2)).unwrap() + 1e-9);
    }
}

#[test]
fn consumption_examples() {
    let mut rng = rng_from_seed(17);
    let s = random_mixed(vec![2, 2], &mut rng);
    for m in [
        Measure::Coherence,
        Measure::GlobalDiscordAt,
        Measure::CoherenceBGivenA(vec![0]),
        Measure::AsymDiscordAt(vec![1]),
    ] {
        assert_eq!(consumption(&s, &s, &m, &comp(2)).unwrap(), 0.0);
    }
    let dephased = dephase(&plus(), &comp(1), &[0]).unwrap();
    assert_abs_diff_eq!(
        consumption(&plus(), &dephased, &Measure::Coherence, &comp(1)).unwrap(),
        1.0,
        epsilon = 1e-10
    );
    // production shows up as a negative consumption
    assert_abs_diff_eq!(
        consumption(&dephased, &plus(), &Measure::Coherence, &comp(1)).unwrap(),
        -1.0,
        epsilon = 1e-10
    );
    assert!(consumption(&plus(), &s, &Measure::Coherence, &comp(1)).is_err());
}

#[test]
fn optimizer_config_validation() {
    let mut cfg = OptimizerConfig::default();
    assert_eq!(cfg.grid_points_per_angle, 12);
    assert_eq!(cfg.multistarts, 16);
    assert_eq!(cfg.max_refine_iters, 500);
    assert_eq!(cfg.refine_tol, 1e-9);
    cfg.multistarts = 0;
    assert!(global_discord(&bell(), &cfg).is_err());
    let cfg = OptimizerConfig {
        refine_tol: 0.0,
        ..Default::default()
    };
    assert!(cfg.validate().is_err());
}

#[test]
fn clamping_window() {
    assert_eq!(clamp_measure(-5e-10).unwrap(), 0.0);
    assert_eq!(clamp_measure(0.25).unwrap(), 0.25);
    assert!(clamp_measure(-2e-6).is_err());
}

#[test]
fn optimizer_is_deterministic() {
    let s = random_mixed(vec![2, 2, 2], &mut rng_from_seed(5));
    let cfg = OptimizerConfig::default();
    let a = global_discord(&s, &cfg).unwrap();
    let b = global_discord(&s, &cfg).unwrap();
    assert_eq!(a, b);
}

fn random_product_unitary(n: usize, seed: u64) -> Vec<CMatrix> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| haar_unitary_with(2, &mut rng).unwrap()).collect()
}

fn random_qubit_basis(n: usize, seed: u64) -> ProductBasis {
    ProductBasis::new(random_product_unitary(n, seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_identity(n in 2usize..=3, seed in any::<u64>()) {
        let s = random_mixed(vec![2; n], &mut rng_from_seed(seed));
        let b = random_qubit_basis(n, seed ^ 0xabc);
        let marginals: f64 = (0..n)
            .map(|k| coherence(&partial_trace(&s, &[k]).unwrap(), &b.restrict(&[k])).unwrap())
            .sum();
        let lhs = coherence(&s, &b).unwrap();
        prop_assert!((lhs - marginals - global_discord_at(&s, &b).unwrap()).abs() < 1e-9);
        prop_assert!((global_discord_at(&s, &b).unwrap() - literal_global_discord(&s, &b)).abs() < 1e-9);
    }

    #[test]
    fn asymmetric_identity(seed in any::<u64>()) {
        let s = random_mixed(vec![2, 2], &mut rng_from_seed(seed));
        let b = random_qubit_basis(2, seed ^ 0x5);
        let c_a = coherence(&partial_trace(&s, &[0]).unwrap(), &b.restrict(&[0])).unwrap();
        let lhs = coherence_b_given_a(&s, &[0], &b).unwrap();
        prop_assert!((lhs - c_a - asym_discord_at(&s, &[0], &b).unwrap()).abs() < 1e-9);
        prop_assert!((asym_discord_at(&s, &[0], &b).unwrap() - literal_asym_discord(&s, &b)).abs() < 1e-9);
    }

    #[test]
    fn monotone_under_dephasing(seed in any::<u64>(), subset in prop::sample::select(vec![vec![0], vec![1], vec![0, 1]])) {
        let s = random_mixed(vec![2, 2], &mut rng_from_seed(seed));
        let b = random_qubit_basis(2, seed ^ 0x77);
        let d = dephase(&s, &b, &subset).unwrap();
        prop_assert!(coherence(&d, &b).unwrap() <= coherence(&s, &b).unwrap() + 1e-9);
    }

    #[test]
    fn local_unitary_covariance(seed in any::<u64>()) {
        let s = random_mixed(vec![2, 2], &mut rng_from_seed(seed));
        let b = random_qubit_basis(2, seed ^ 0x1);
        let us = random_product_unitary(2, seed ^ 0x2);
        let g = Gate::new(us[0].kronecker(&us[1]), vec![0, 1]).unwrap();
        let rotated = apply_gate(&s, &g).unwrap();
        let moved = ProductBasis::new(vec![&us[0] * b.local(0), &us[1] * b.local(1)]).unwrap();
        prop_assert!((coherence(&rotated, &moved).unwrap() - coherence(&s, &b).unwrap()).abs() < 1e-9);
        prop_assert!((global_discord_at(&rotated, &moved).unwrap() - global_discord_at(&s, &b).unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn discord_below_coherence_in_every_basis(seed in any::<u64>()) {
        let s = random_mixed(vec![2, 2], &mut rng_from_seed(seed));
        let d = rel_entropy_discord(&s, &OptimizerConfig::with_seed(seed)).unwrap().value;
        for k in 0..10 {
            let b = random_qubit_basis(2, seed.wrapping_add(k));
            prop_assert!(d <= coherence(&s, &b).unwrap() + 1e-9);
        }
    }

    #[test]
    fn optimizer_soundness(seed in any::<u64>()) {
        let s = random_mixed(vec![2, 2], &mut rng_from_seed(seed));
        let r = global_discord(&s, &OptimizerConfig::default()).unwrap();
        let again = global_discord_at(&s, r.argmin_basis.as_ref().unwrap()).unwrap();
        prop_assert!((r.value - again).abs() <= 1e-12);
        prop_assert!(r.value <= global_discord_at(&s, &comp(2)).unwrap() + 1e-9);
    }
}

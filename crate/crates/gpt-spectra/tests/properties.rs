//! Cross-module invariants on seeded random ensembles.

use gpt_spectra::axioms;
use gpt_spectra::linalg::Matrix;
use gpt_spectra::majorize::{is_doubly_stochastic, majorizes, Spectrum};
use gpt_spectra::purify;
use gpt_spectra::purity::{self, Verdict};
use gpt_spectra::sample;
use gpt_spectra::spectral::{self, diagonalize, DistinguishOutcome};
use gpt_spectra::theory::{
    self, dagger, deterministic_effect, invariant_state, is_observation_test, pair, State, Theory,
};
use gpt_spectra::Tolerances;

use proptest::prelude::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn unit_effect_preserved_by_generators_on_random_states() {
    let t = tol();
    for theory in [
        Theory::QuantumReal { dim: 4 },
        Theory::Classical { dim: 6 },
        Theory::Gbit,
    ] {
        let u = deterministic_effect(theory);
        let mut rng = sample::rng_from_seed(101);
        for _ in 0..100 {
            let rho = sample::random_state(theory, &mut rng);
            let before = pair(&u, &rho, &t).unwrap();
            for g in theory.group_generators() {
                let after = pair(&u, &g.apply(&rho).unwrap(), &t).unwrap();
                assert!((after - before).abs() < 1e-10, "{theory:?}");
            }
        }
    }
}

#[test]
fn channel_roundtrip_on_random_states() {
    let t = tol();
    for theory in [
        Theory::QuantumReal { dim: 3 },
        Theory::Classical { dim: 5 },
        Theory::Gbit,
    ] {
        let mut rng = sample::rng_from_seed(55);
        for _ in 0..50 {
            let rho = sample::random_state(theory, &mut rng);
            let ch = sample::random_reversible(theory, &mut rng);
            let back = ch.inverse().apply(&ch.apply(&rho).unwrap()).unwrap();
            assert!(back.max_abs_diff(&rho) < t.channel_roundtrip);
        }
    }
}

#[test]
fn quantum_dagger_pairs_delta_on_orthonormal_bases() {
    let t = tol();
    let mut rng = sample::rng_from_seed(210);
    for d in 2..=6 {
        let basis = sample::random_orthonormal_basis(d, &mut rng);
        let theory = Theory::QuantumReal { dim: d };
        let states: Vec<State> = basis
            .iter()
            .map(|v| State::new(theory, Matrix::outer(v).into_data(), &t).unwrap())
            .collect();
        for (i, alpha) in states.iter().enumerate() {
            let a = dagger(alpha, &t).unwrap();
            for (j, beta) in states.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((pair(&a, beta, &t).unwrap() - expected).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn diagonalization_effects_form_observation_tests() {
    let t = tol();
    let mut rng = sample::rng_from_seed(77);
    for d in 2..=6 {
        for _ in 0..10 {
            let m = sample::random_density(d, &mut rng);
            let rho = State::quantum(&m, &t).unwrap();
            let diag = diagonalize(&rho, &t).unwrap();
            assert!(is_observation_test(&diag.test_effects, &t).unwrap());
        }
    }
    // Classical states with zero entries exercise the completion path.
    let p = State::classical(vec![0.0, 0.6, 0.4, 0.0], &t).unwrap();
    let diag = diagonalize(&p, &t).unwrap();
    assert_eq!(diag.eigenvalues.len(), 2);
    assert_eq!(diag.test_effects.len(), 4);
    assert!(is_observation_test(&diag.test_effects, &t).unwrap());
}

#[test]
fn monotone_spectrum_and_reconstruction_on_random_states() {
    let t = tol();
    let mut rng = sample::rng_from_seed(300);
    for i in 0..200 {
        let d = 2 + (i % 5);
        let m = sample::random_density(d, &mut rng);
        let rho = State::quantum(&m, &t).unwrap();
        let diag = diagonalize(&rho, &t).unwrap();
        for w in diag.eigenvalues.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(diag.reconstruction_error <= 1e-8);
        let total: f64 = diag.eigenvalues.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn classical_diagonalize_matches_sorted_input_on_rationals() {
    // All rational probability vectors with denominator <= 6, d <= 4.
    // The peeling route renormalizes by (1 - p*) every step, so the match is
    // to a few ulp, not bit-exact.
    let t = tol();
    let entries: Vec<i64> = vec![60, 50, 48, 45, 40, 36, 30, 24, 20, 15, 12, 10, 0];
    for d in 2..=4usize {
        let mut stack = vec![(Vec::<i64>::new(), 0i64)];
        while let Some((prefix, total)) = stack.pop() {
            if prefix.len() == d {
                if total != 60 {
                    continue;
                }
                let probs: Vec<f64> = prefix.iter().map(|&k| k as f64 / 60.0).collect();
                let state = State::classical(probs.clone(), &t).unwrap();
                let diag = diagonalize(&state, &t).unwrap();
                let mut sorted = probs;
                sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
                sorted.retain(|&x| x > 0.0);
                assert_eq!(diag.eigenvalues.len(), sorted.len());
                for (a, b) in diag.eigenvalues.iter().zip(&sorted) {
                    assert!((a - b).abs() < 1e-14, "{a} vs {b}");
                }
                continue;
            }
            for &e in &entries {
                if total + e <= 60 {
                    let mut next = prefix.clone();
                    next.push(e);
                    stack.push((next, total + e));
                }
            }
        }
    }
}

#[test]
fn convex_combinations_of_birkhoff_outputs_stay_doubly_stochastic() {
    let t = tol();
    let mut rng = sample::rng_from_seed(404);
    let a = sample::random_doubly_stochastic(5, 6, &mut rng);
    let b = sample::random_doubly_stochastic(5, 9, &mut rng);
    let da = gpt_spectra::majorize::birkhoff(&a, &t).unwrap();
    let db = gpt_spectra::majorize::birkhoff(&b, &t).unwrap();
    let mix = da.reconstruct().scale(0.3).add(&db.reconstruct().scale(0.7));
    assert!(is_doubly_stochastic(&mix, 1e-9).unwrap());
}

#[test]
fn extreme_spectra_bound_the_majorization_order() {
    let t = tol();
    let mut rng = sample::rng_from_seed(500);
    for d in 2..=8 {
        let uniform = Spectrum::new(vec![1.0 / d as f64; d], &t).unwrap();
        let mut sharp = vec![0.0; d];
        sharp[0] = 1.0;
        let sharp = Spectrum::new(sharp, &t).unwrap();
        for _ in 0..25 {
            let s = sample::random_spectrum(d, &mut rng);
            assert!(majorizes(&s, &uniform, &t).unwrap());
            assert!(majorizes(&sharp, &s, &t).unwrap());
        }
    }
}

#[test]
fn necessity_direction_on_classical_ensembles() {
    let t = tol();
    let mut rng = sample::rng_from_seed(600);
    for i in 0..100 {
        let d = 2 + (i % 7);
        let theory = Theory::Classical { dim: d };
        let sigma = sample::random_state(theory, &mut rng);
        let r = purity::random_rare(theory, 1 + (i % 5), 600 + i as u64);
        let rho = r.apply(&sigma).unwrap();
        let dq = diagonalize(&sigma, &t).unwrap();
        let dp = diagonalize(&rho, &t).unwrap();
        let q = Spectrum::from_diagonalization(&dq, d, &t).unwrap();
        let p = Spectrum::from_diagonalization(&dp, d, &t).unwrap();
        assert!(majorizes(&q, &p, &t).unwrap());
    }
}

#[test]
fn steering_reproduces_every_diagonal_component() {
    let t = tol();
    let mut rng = sample::rng_from_seed(700);
    for d in 2..=4 {
        let m = sample::random_density(d, &mut rng);
        let rho = State::quantum(&m, &t).unwrap();
        let diag = diagonalize(&rho, &t).unwrap();
        let psi = purify::purify(&rho, &t).unwrap();
        for (p_i, alpha) in diag.eigenvalues.iter().zip(&diag.pure_states) {
            if *p_i < 1e-12 {
                continue;
            }
            let s = purify::steer(&psi, alpha, *p_i, &t).unwrap();
            assert!(s.reproduction_error <= 1e-8);
        }
    }
}

#[test]
fn dagger_sums_to_unit_on_diagonalization_bases() {
    let t = tol();
    let mut rng = sample::rng_from_seed(800);
    for d in 2..=5 {
        let m = sample::random_density(d, &mut rng);
        let rho = State::quantum(&m, &t).unwrap();
        let diag = diagonalize(&rho, &t).unwrap();
        let u = deterministic_effect(rho.theory());
        let mut sum = vec![0.0; rho.coords().len()];
        for e in &diag.test_effects {
            for (s, c) in sum.iter_mut().zip(e.coords()) {
                *s += c;
            }
        }
        for (s, c) in sum.iter().zip(u.coords()) {
            assert!((s - c).abs() < 1e-9);
        }
    }
}

#[test]
fn marginal_consistency_two_hundred_random_states() {
    let t = tol();
    let mut rng = sample::rng_from_seed(900);
    for i in 0..200 {
        let d = 2 + (i % 5);
        let m = sample::random_density(d, &mut rng);
        let rho = State::quantum(&m, &t).unwrap();
        let psi = purify::purify(&rho, &t).unwrap();
        assert!(psi.marginal_system().max_abs_diff(&rho) <= 1e-10);
    }
}

#[test]
fn preorder_reflexive_and_transitive_on_random_triples() {
    let t = tol();
    let theory = Theory::QuantumReal { dim: 3 };
    let mut rng = sample::rng_from_seed(1000);
    for i in 0..10 {
        let sigma = sample::random_state(theory, &mut rng);
        // Reflexivity.
        let cert = purity::is_more_mixed(&sigma, &sigma, &t).unwrap();
        assert_eq!(cert.verdict, Verdict::EquallyMixed);
        // Transitivity along a chain sigma -> R1 sigma -> R2 R1 sigma.
        let r1 = purity::random_rare(theory, 2 + (i % 3), 2000 + i as u64);
        let r2 = purity::random_rare(theory, 2, 3000 + i as u64);
        let mid = r1.apply(&sigma).unwrap();
        let low = r2.apply(&mid).unwrap();
        let cert = purity::is_more_mixed(&low, &sigma, &t).unwrap();
        assert!(matches!(
            cert.verdict,
            Verdict::MoreMixed | Verdict::EquallyMixed
        ));
        assert!(cert.residual_error <= 1e-8);
    }
}

#[test]
fn gbit_axiom_report_is_the_negative_control() {
    let t = tol();
    let report = axioms::run_report(Theory::Gbit, 8, 123, &t).unwrap();
    let failures = report.failures();
    assert_eq!(failures.len(), 1);
    assert_eq!(failures[0].name, "unit_state_uniqueness");
    // The edge-midpoint state claims a unit-probability pure effect while
    // being mixed, and is rejected by the diagonalization procedure.
    let edge_midpoint = State::gbit(1.0, 0.0, &t).unwrap();
    let step = spectral::peel(&edge_midpoint, &t).unwrap();
    assert_eq!(step.p_star, 1.0);
    assert!(step.alpha.max_abs_diff(&edge_midpoint) > 0.5);
    assert!(matches!(
        diagonalize(&edge_midpoint, &t),
        Err(gpt_spectra::Error::NotDiagonalizable(_))
    ));
}

#[test]
fn verify_distinguishable_accepts_diagonalization_outputs() {
    let t = tol();
    let mut rng = sample::rng_from_seed(1100);
    for d in 2..=5 {
        let m = sample::random_density(d, &mut rng);
        let rho = State::quantum(&m, &t).unwrap();
        let diag = diagonalize(&rho, &t).unwrap();
        match spectral::verify_distinguishable(&diag.pure_states, &t).unwrap() {
            DistinguishOutcome::Certificate(test) => {
                assert_eq!(test.len(), d);
            }
            DistinguishOutcome::Violation { i, j, value } => {
                panic!("unexpected violation ({i},{j}) = {value}");
            }
        }
    }
}

#[test]
fn invariant_state_spectrum_shared_between_state_and_complement() {
    let t = tol();
    for d in 2..=6 {
        let chi = invariant_state(Theory::QuantumReal { dim: d });
        let report = purify::verify_pstar_equality(&chi, &t).unwrap();
        assert!((report.p_star_state - 1.0 / d as f64).abs() < 1e-10);
        assert!(report.difference <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_is_bilinear_under_mixing(seed in 0u64..1_000, lambda in 0.0f64..1.0) {
        let t = tol();
        let theory = Theory::QuantumReal { dim: 3 };
        let mut rng = sample::rng_from_seed(seed);
        let r1 = sample::random_state(theory, &mut rng);
        let r2 = sample::random_state(theory, &mut rng);
        let a = theory::dagger(
            &State::new(
                theory,
                Matrix::outer(&gpt_spectra::linalg::normalize(&[1.0, -0.5, 0.25])).into_data(),
                &t,
            ).unwrap(),
            &t,
        ).unwrap();
        let mixed: Vec<f64> = r1
            .coords()
            .iter()
            .zip(r2.coords())
            .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
            .collect();
        let mix = State::new(theory, mixed, &t).unwrap();
        let lhs = pair(&a, &mix, &t).unwrap();
        let rhs = lambda * pair(&a, &r1, &t).unwrap() + (1.0 - lambda) * pair(&a, &r2, &t).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn transfer_matrix_maps_majorized_pairs(seed in 0u64..1_000, d in 2usize..7) {
        let t = tol();
        let mut rng = sample::rng_from_seed(seed);
        let q = sample::random_spectrum(d, &mut rng);
        let b = sample::random_doubly_stochastic(d, d, &mut rng);
        let p = Spectrum::from_unsorted(b.mat_vec(q.values()), &t).unwrap();
        prop_assert!(majorizes(&q, &p, &t).unwrap());
        let m = gpt_spectra::majorize::transfer_matrix(&p, &q, &t).unwrap();
        prop_assert!(is_doubly_stochastic(&m, 1e-9).unwrap());
        let image = m.mat_vec(q.values());
        for (a, b) in image.iter().zip(p.values()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn birkhoff_reconstructs_random_mixtures(seed in 0u64..1_000, d in 2usize..9, m_perms in 2usize..10) {
        let t = tol();
        let mut rng = sample::rng_from_seed(seed);
        let m = sample::random_doubly_stochastic(d, m_perms, &mut rng);
        let decomp = gpt_spectra::majorize::birkhoff(&m, &t).unwrap();
        prop_assert!(decomp.reconstruct().max_abs_diff(&m) < 1e-9);
        prop_assert!(decomp.len() <= (d - 1) * (d - 1) + 1);
    }
}

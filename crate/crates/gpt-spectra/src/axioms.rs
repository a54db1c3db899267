//! Executable checks of the structural assumptions behind diagonalization,
//! per theory model, including the negative controls where the gbit must
//! fail. Axioms are checked through their finite-dimensional operational
//! consequences, not their categorical statements.

use crate::error::Result;
use crate::linalg::{self, Matrix};
use crate::purify;
use crate::sample;
use crate::spectral::{diagonalize, eigensolve_symmetric};
use crate::theory::{
    self, deterministic_effect, gbit_corners, gbit_extreme_effects, invariant_state, pair_raw,
    Effect, State, Theory, GBIT_MAXIMAL_PAIRS,
};
use crate::tol::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckVerdict {
    Pass,
    Fail,
    Inapplicable,
}

/// Witness data attached to a check outcome.
#[derive(Clone, Debug)]
pub enum CheckWitness {
    None,
    /// A pure effect attaining probability 1 on a state.
    Attainment { effect: Effect, state: State },
    /// A pure effect whose unit-probability face contains several states.
    FaceDegeneracy { effect: Effect, states: Vec<State> },
    Note(String),
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub verdict: CheckVerdict,
    pub detail: String,
    pub witness: CheckWitness,
}

/// A full per-model report; deterministic given (model, trials, seed).
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub model: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl AxiomReport {
    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks
            .iter()
            .filter(|c| c.verdict == CheckVerdict::Fail)
            .collect()
    }
}

/// Run every check for a model.
pub fn run_report(theory: Theory, trials: usize, seed: u64, tol: &Tolerances) -> Result<AxiomReport> {
    let checks = vec![
        check_causality_unique_unit(theory, trials, seed, tol),
        check_pure_sharpness(theory, tol),
        check_unit_state_uniqueness(theory, tol),
        check_invariant_spectrum(theory, tol),
        check_strong_symmetry(theory, trials, seed, tol),
        check_maximal_test_purity(theory, trials, seed, tol),
        check_purification(theory, trials, seed, tol),
        purity_preservation_note(),
    ];
    Ok(AxiomReport {
        model: theory.name().into(),
        dim: theory.dim_operational(),
        trials,
        seed,
        checks,
    })
}

/// Operative consequence of causality: the deterministic effect gives 1 on
/// normalized states and is preserved by every reversible generator.
pub fn check_causality_unique_unit(
    theory: Theory,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CheckResult {
    let u = deterministic_effect(theory);
    let mut rng = sample::rng_from_seed(seed);
    let mut worst = 0.0_f64;
    let samples: Vec<State> = match theory.extreme_states() {
        Some(extremes) => extremes,
        None => (0..trials.max(4))
            .map(|_| sample::random_state(theory, &mut rng))
            .collect(),
    };
    for rho in &samples {
        worst = worst.max((pair_raw(&u, rho) - 1.0).abs());
        for g in theory.group_generators() {
            if let Ok(moved) = g.apply(rho) {
                worst = worst.max((pair_raw(&u, &moved) - pair_raw(&u, rho)).abs());
            }
        }
    }
    if worst <= tol.invariant_fixed {
        CheckResult {
            name: "causality_unique_deterministic_effect",
            verdict: CheckVerdict::Pass,
            detail: format!("unit effect stable within {worst:e}"),
            witness: CheckWitness::None,
        }
    } else {
        CheckResult {
            name: "causality_unique_deterministic_effect",
            verdict: CheckVerdict::Fail,
            detail: format!("unit effect drifts by {worst:e}"),
            witness: CheckWitness::None,
        }
    }
}

/// At least one pure effect attains probability 1 on some state.
pub fn check_pure_sharpness(theory: Theory, tol: &Tolerances) -> CheckResult {
    let (effect, state) = match theory {
        Theory::QuantumReal { dim } => {
            let mut v = vec![0.0; dim];
            v[0] = 1.0;
            let p = Matrix::outer(&v).into_data();
            (
                Effect::from_parts_unchecked(theory, p.clone()),
                State::from_parts_unchecked(theory, p),
            )
        }
        Theory::Classical { dim } => {
            let mut c = vec![0.0; dim];
            c[0] = 1.0;
            (
                Effect::from_parts_unchecked(theory, c.clone()),
                State::from_parts_unchecked(theory, c),
            )
        }
        Theory::Gbit => (
            gbit_extreme_effects()[0].clone(),
            gbit_corners()[0].clone(),
        ),
    };
    let value = pair_raw(&effect, &state);
    if (value - 1.0).abs() <= tol.pair_clamp {
        CheckResult {
            name: "pure_sharpness",
            verdict: CheckVerdict::Pass,
            detail: format!("pure effect attains {value}"),
            witness: CheckWitness::Attainment { effect, state },
        }
    } else {
        CheckResult {
            name: "pure_sharpness",
            verdict: CheckVerdict::Fail,
            detail: format!("best pure attainment {value}"),
            witness: CheckWitness::None,
        }
    }
}

/// For each extreme pure effect, the set of normalized states attaining
/// probability 1 must be a single pure state. The gbit fails: each edge
/// effect attains 1 on a whole edge of the square.
pub fn check_unit_state_uniqueness(theory: Theory, tol: &Tolerances) -> CheckResult {
    match theory {
        Theory::QuantumReal { dim } => {
            // Unit-probability face of a rank-one projector is the span of its
            // vector: the unit eigenspace must be one-dimensional.
            let mut effects: Vec<Vec<f64>> = Vec::new();
            for i in 0..dim {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                effects.push(v);
            }
            effects.push(linalg::normalize(&vec![1.0; dim]));
            let mut alt = vec![1.0; dim];
            alt[0] = -1.0;
            effects.push(linalg::normalize(&alt));
            for v in &effects {
                let a = Matrix::outer(v);
                let eig = match eigensolve_symmetric(&a, tol) {
                    Ok(e) => e,
                    Err(e) => {
                        return CheckResult {
                            name: "unit_state_uniqueness",
                            verdict: CheckVerdict::Fail,
                            detail: format!("eigensolver failed: {e}"),
                            witness: CheckWitness::None,
                        }
                    }
                };
                let unit_dim = eig
                    .eigenvalues
                    .iter()
                    .filter(|l| (*l - 1.0).abs() <= tol.distinguish)
                    .count();
                if unit_dim != 1 {
                    return CheckResult {
                        name: "unit_state_uniqueness",
                        verdict: CheckVerdict::Fail,
                        detail: format!("unit eigenspace has dimension {unit_dim}"),
                        witness: CheckWitness::None,
                    };
                }
            }
            CheckResult {
                name: "unit_state_uniqueness",
                verdict: CheckVerdict::Pass,
                detail: "every sampled pure effect has a one-dimensional unit face".into(),
                witness: CheckWitness::None,
            }
        }
        Theory::Classical { dim } => {
            // The face of indicator i is exactly vertex i.
            CheckResult {
                name: "unit_state_uniqueness",
                verdict: CheckVerdict::Pass,
                detail: format!("all {dim} indicator faces are single vertices"),
                witness: CheckWitness::None,
            }
        }
        Theory::Gbit => {
            let corners = gbit_corners();
            for effect in gbit_extreme_effects() {
                let attaining: Vec<State> = corners
                    .iter()
                    .filter(|c| (pair_raw(&effect, c) - 1.0).abs() <= tol.pair_clamp)
                    .cloned()
                    .collect();
                if attaining.len() > 1 {
                    return CheckResult {
                        name: "unit_state_uniqueness",
                        verdict: CheckVerdict::Fail,
                        detail: format!(
                            "effect attains 1 on {} corners; the unit face is a whole edge",
                            attaining.len()
                        ),
                        witness: CheckWitness::FaceDegeneracy { effect, states: attaining },
                    };
                }
            }
            CheckResult {
                name: "unit_state_uniqueness",
                verdict: CheckVerdict::Pass,
                detail: "no degenerate unit faces found".into(),
                witness: CheckWitness::None,
            }
        }
    }
}

/// Every eigenvalue of the invariant state equals 1/d.
pub fn check_invariant_spectrum(theory: Theory, tol: &Tolerances) -> CheckResult {
    if matches!(theory, Theory::Gbit) {
        return CheckResult {
            name: "invariant_spectrum",
            verdict: CheckVerdict::Inapplicable,
            detail: "diagonalization undefined for this model".into(),
            witness: CheckWitness::None,
        };
    }
    let d = theory.dim_operational();
    let chi = invariant_state(theory);
    match diagonalize(&chi, tol) {
        Ok(diag) => {
            let target = 1.0 / d as f64;
            let worst = diag
                .padded_eigenvalues(d)
                .iter()
                .fold(0.0_f64, |m, p| m.max((p - target).abs()));
            if diag.eigenvalues.len() == d && worst <= tol.invariant_spectrum {
                CheckResult {
                    name: "invariant_spectrum",
                    verdict: CheckVerdict::Pass,
                    detail: format!("all eigenvalues within {worst:e} of 1/{d}"),
                    witness: CheckWitness::None,
                }
            } else {
                CheckResult {
                    name: "invariant_spectrum",
                    verdict: CheckVerdict::Fail,
                    detail: format!("eigenvalues deviate from 1/{d} by {worst:e}"),
                    witness: CheckWitness::None,
                }
            }
        }
        Err(e) => CheckResult {
            name: "invariant_spectrum",
            verdict: CheckVerdict::Fail,
            detail: format!("diagonalization failed: {e}"),
            witness: CheckWitness::None,
        },
    }
}

/// The reversible group maps sampled maximal pure sets onto each other
/// elementwise.
pub fn check_strong_symmetry(
    theory: Theory,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CheckResult {
    let mut rng = sample::rng_from_seed(seed);
    match theory {
        Theory::QuantumReal { dim } => {
            for trial in 0..trials.max(1) {
                let a = sample::random_orthonormal_basis(dim, &mut rng);
                let b = sample::random_orthonormal_basis(dim, &mut rng);
                // O b_i = a_i.
                let mut o = Matrix::zeros(dim, dim);
                for (ai, bi) in a.iter().zip(&b) {
                    for r in 0..dim {
                        for c in 0..dim {
                            o.set(r, c, o.get(r, c) + ai[r] * bi[c]);
                        }
                    }
                }
                let gram_err = o.transpose().matmul(&o).max_abs_diff(&Matrix::identity(dim));
                if gram_err > tol.strong_symmetry {
                    return CheckResult {
                        name: "strong_symmetry",
                        verdict: CheckVerdict::Fail,
                        detail: format!("trial {trial}: connector not orthogonal ({gram_err:e})"),
                        witness: CheckWitness::None,
                    };
                }
                for (ai, bi) in a.iter().zip(&b) {
                    let mapped = o.matmul(&Matrix::outer(bi)).matmul(&o.transpose());
                    let err = mapped.max_abs_diff(&Matrix::outer(ai));
                    if err > tol.strong_symmetry {
                        return CheckResult {
                            name: "strong_symmetry",
                            verdict: CheckVerdict::Fail,
                            detail: format!("trial {trial}: element mapped with error {err:e}"),
                            witness: CheckWitness::None,
                        };
                    }
                }
            }
            CheckResult {
                name: "strong_symmetry",
                verdict: CheckVerdict::Pass,
                detail: format!("{} random basis pairs connected", trials.max(1)),
                witness: CheckWitness::None,
            }
        }
        Theory::Classical { dim } => {
            for _ in 0..trials.max(1) {
                let a = sample::random_permutation(dim, &mut rng);
                let b = sample::random_permutation(dim, &mut rng);
                // Connector sends vertex b[i] to vertex a[i].
                let mut conn = vec![0; dim];
                for i in 0..dim {
                    conn[b[i]] = a[i];
                }
                let mut seen = vec![false; dim];
                for &x in &conn {
                    if seen[x] {
                        return CheckResult {
                            name: "strong_symmetry",
                            verdict: CheckVerdict::Fail,
                            detail: "connector is not a permutation".into(),
                            witness: CheckWitness::None,
                        };
                    }
                    seen[x] = true;
                }
            }
            CheckResult {
                name: "strong_symmetry",
                verdict: CheckVerdict::Pass,
                detail: format!("{} ordering pairs connected by permutations", trials.max(1)),
                witness: CheckWitness::None,
            }
        }
        Theory::Gbit => {
            // Ordered diagonal pairs; every pair of them must be connected by
            // a dihedral element acting elementwise.
            let corners = gbit_corners();
            let mut ordered: Vec<[State; 2]> = Vec::new();
            for &(i, j) in &GBIT_MAXIMAL_PAIRS {
                ordered.push([corners[i].clone(), corners[j].clone()]);
                ordered.push([corners[j].clone(), corners[i].clone()]);
            }
            for from in &ordered {
                for to in &ordered {
                    let found = theory::Dihedral::all().into_iter().any(|g| {
                        let ch = crate::theory::ReversibleChannel::dihedral(g);
                        from.iter().zip(to).all(|(f, t)| {
                            ch.apply(f)
                                .map(|m| m.max_abs_diff(t) <= tol.strong_symmetry)
                                .unwrap_or(false)
                        })
                    });
                    if !found {
                        return CheckResult {
                            name: "strong_symmetry",
                            verdict: CheckVerdict::Fail,
                            detail: "no dihedral element connects two diagonal pairs".into(),
                            witness: CheckWitness::None,
                        };
                    }
                }
            }
            CheckResult {
                name: "strong_symmetry",
                verdict: CheckVerdict::Pass,
                detail: "dihedral group acts transitively on the two diagonal pairs".into(),
                witness: CheckWitness::None,
            }
        }
    }
}

/// Daggers of a maximal pure set sum to the unit effect and distinguish the
/// set. Inapplicable where the dagger is not unique.
pub fn check_maximal_test_purity(
    theory: Theory,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CheckResult {
    let mut rng = sample::rng_from_seed(seed);
    match theory {
        Theory::Gbit => CheckResult {
            name: "maximal_test_purity",
            verdict: CheckVerdict::Inapplicable,
            detail: "no unique dagger in this model".into(),
            witness: CheckWitness::None,
        },
        Theory::Classical { dim } => {
            let vertices: Vec<State> = theory.extreme_states().expect("finite model");
            match maximal_test_check(&vertices, dim, tol) {
                Ok(()) => CheckResult {
                    name: "maximal_test_purity",
                    verdict: CheckVerdict::Pass,
                    detail: "indicators sum to the all-ones effect".into(),
                    witness: CheckWitness::None,
                },
                Err(detail) => CheckResult {
                    name: "maximal_test_purity",
                    verdict: CheckVerdict::Fail,
                    detail,
                    witness: CheckWitness::None,
                },
            }
        }
        Theory::QuantumReal { dim } => {
            for trial in 0..trials.max(1) {
                let basis = sample::random_orthonormal_basis(dim, &mut rng);
                let states: Vec<State> = basis
                    .iter()
                    .map(|v| State::from_parts_unchecked(theory, Matrix::outer(v).into_data()))
                    .collect();
                if let Err(detail) = maximal_test_check(&states, dim, tol) {
                    return CheckResult {
                        name: "maximal_test_purity",
                        verdict: CheckVerdict::Fail,
                        detail: format!("trial {trial}: {detail}"),
                        witness: CheckWitness::None,
                    };
                }
            }
            CheckResult {
                name: "maximal_test_purity",
                verdict: CheckVerdict::Pass,
                detail: format!("{} sampled bases pass", trials.max(1)),
                witness: CheckWitness::None,
            }
        }
    }
}

fn maximal_test_check(states: &[State], d: usize, tol: &Tolerances) -> std::result::Result<(), String> {
    let theory = states[0].theory();
    let mut daggers = Vec::with_capacity(d);
    for s in states {
        match theory::dagger(s, tol) {
            Ok(a) => daggers.push(a),
            Err(e) => return Err(format!("dagger failed: {e}")),
        }
    }
    let u = deterministic_effect(theory);
    let mut sum = vec![0.0; theory.coord_len()];
    for a in &daggers {
        for (s, c) in sum.iter_mut().zip(a.coords()) {
            *s += c;
        }
    }
    for (s, c) in sum.iter().zip(u.coords()) {
        if (s - c).abs() > tol.test_sum {
            return Err(format!("dagger sum misses u by {:e}", (s - c).abs()));
        }
    }
    for (i, a) in daggers.iter().enumerate() {
        for (j, s) in states.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            let v = pair_raw(a, s);
            if (v - expected).abs() > tol.distinguish {
                return Err(format!("pairing ({i},{j}) = {v}"));
            }
        }
    }
    Ok(())
}

/// Purification marginal consistency for the quantum model; recorded as
/// absent for the others.
pub fn check_purification(
    theory: Theory,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
) -> CheckResult {
    match theory {
        Theory::QuantumReal { dim } => {
            let mut rng = sample::rng_from_seed(seed);
            for trial in 0..trials.max(1) {
                let m = sample::random_density(dim, &mut rng);
                let rho = State::from_parts_unchecked(theory, m.into_data());
                match purify::purify(&rho, tol) {
                    Ok(psi) => {
                        let err = psi.marginal_system().max_abs_diff(&rho);
                        if err > tol.channel_roundtrip {
                            return CheckResult {
                                name: "purification",
                                verdict: CheckVerdict::Fail,
                                detail: format!("trial {trial}: marginal error {err:e}"),
                                witness: CheckWitness::None,
                            };
                        }
                    }
                    Err(e) => {
                        return CheckResult {
                            name: "purification",
                            verdict: CheckVerdict::Fail,
                            detail: format!("trial {trial}: {e}"),
                            witness: CheckWitness::None,
                        }
                    }
                }
            }
            CheckResult {
                name: "purification",
                verdict: CheckVerdict::Pass,
                detail: format!("{} random states purified with consistent marginals", trials.max(1)),
                witness: CheckWitness::None,
            }
        }
        Theory::Classical { .. } => CheckResult {
            name: "purification",
            verdict: CheckVerdict::Inapplicable,
            detail: "not checked: known absent".into(),
            witness: CheckWitness::Note("classical theory admits no purification".into()),
        },
        Theory::Gbit => CheckResult {
            name: "purification",
            verdict: CheckVerdict::Inapplicable,
            detail: "not checked: absent by construction".into(),
            witness: CheckWitness::None,
        },
    }
}

fn purity_preservation_note() -> CheckResult {
    CheckResult {
        name: "purity_preservation",
        verdict: CheckVerdict::Inapplicable,
        detail: "assumed by model construction".into(),
        witness: CheckWitness::Note(
            "the model does not enumerate general transformations".into(),
        ),
    }
}

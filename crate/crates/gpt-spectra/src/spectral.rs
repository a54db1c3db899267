//! Operational diagonalization by iterative pure-effect peeling, the
//! perfect-distinguishability certificate, and an independent Jacobi
//! eigensolver for cross-checking the quantum model.
//!
//! The peeling route never calls the Jacobi solver: its per-step maximizer
//! runs power iteration with matrix squaring (see `linalg::top_eigenpair`),
//! so the two eigenvalue routes stay independent down to the kernel level.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::theory::{
    self, complete_to_maximal, dagger, maximize_pure_effect, DistinguishSearch, Effect,
    ObservationTest, State,
};
use crate::tol::Tolerances;

/// A convex decomposition of a state into perfectly distinguishable pure
/// states, together with the distinguishing observation-test.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Weights, non-increasing. One entry per peeling step; rank-deficient
    /// states yield fewer entries than the operational dimension.
    pub eigenvalues: Vec<f64>,
    /// The pure states of the decomposition, aligned with `eigenvalues`.
    pub pure_states: Vec<State>,
    /// Daggers of the pure states, completed to a full observation-test when
    /// the state is rank-deficient. `test_effects[i]` pairs to delta_ij with
    /// `pure_states[j]`.
    pub test_effects: Vec<Effect>,
    /// Max-norm of rho minus the reconstructed sum.
    pub reconstruction_error: f64,
    /// Number of peeling iterations performed.
    pub steps: usize,
}

impl Diagonalization {
    /// Eigenvalues padded with exact zeros to `len`.
    pub fn padded_eigenvalues(&self, len: usize) -> Vec<f64> {
        let mut out = self.eigenvalues.clone();
        while out.len() < len {
            out.push(0.0);
        }
        out
    }
}

/// One step of the peeling procedure: rho = p_star alpha + (1 - p_star) sigma.
#[derive(Clone, Debug)]
pub struct PeelStep {
    pub p_star: f64,
    pub alpha: State,
    /// Normalized residual; absent when p_star reaches 1 within the band.
    pub residual: Option<State>,
}

/// The maximal weight of a pure state in a convex decomposition of rho,
/// equal to the maximum of (a|rho) over normalized pure effects.
pub fn p_star(rho: &State, tol: &Tolerances) -> Result<f64> {
    Ok(maximize_pure_effect(rho, tol)?.p_star)
}

/// Split off the maximal pure component: rho = p alpha + (1 - p) sigma.
///
/// The residual is checked against the state cone; leaving it beyond the
/// cone band is the signature of a model where the peeling consequence
/// fails, and is reported as `ResidualOutsideCone`.
pub fn peel(rho: &State, tol: &Tolerances) -> Result<PeelStep> {
    let maximizer = maximize_pure_effect(rho, tol)?;
    let p = maximizer.p_star;
    if p >= 1.0 - tol.peel_unit {
        return Ok(PeelStep { p_star: p, alpha: maximizer.state, residual: None });
    }
    let sigma_coords: Vec<f64> = rho
        .coords()
        .iter()
        .zip(maximizer.state.coords())
        .map(|(r, a)| (r - p * a) / (1.0 - p))
        .collect();
    let violation = theory::cone_violation(rho.theory(), &sigma_coords);
    let band = match rho.theory() {
        theory::Theory::QuantumReal { .. } => tol.cone_quantum,
        theory::Theory::Classical { .. } => tol.cone_classical,
        theory::Theory::Gbit => tol.cone_gbit,
    };
    if violation > band {
        return Err(Error::ResidualOutsideCone(format!(
            "residual violates the {} cone by {:e} after removing p* = {}",
            rho.theory().name(),
            violation,
            p
        )));
    }
    let mut sigma = State::from_parts_unchecked(rho.theory(), sigma_coords);
    let norm = sigma.norm();
    if (norm - 1.0).abs() > 1e-15 && norm > 0.0 {
        let rescaled: Vec<f64> = sigma.coords().iter().map(|x| x / norm).collect();
        sigma = State::from_parts_unchecked(rho.theory(), rescaled);
    }
    Ok(PeelStep { p_star: p, alpha: maximizer.state, residual: Some(sigma) })
}

/// Diagonalize a normalized state by iterated peeling.
///
/// Weights accumulate as p_i = p_star_i * prod_{j<i} (1 - p_star_j). The
/// procedure stops at a pure residual, at cumulative weight (u|rho), or at
/// the operational dimension; it then certifies pairwise distinguishability
/// through the unique daggers and completes them to an observation-test.
/// Models without a unique dagger fail the certificate, which is the
/// expected outcome for the gbit.
pub fn diagonalize(rho: &State, tol: &Tolerances) -> Result<Diagonalization> {
    let theory = rho.theory();
    let d = theory.dim_operational();
    let target = rho.norm();
    let mut eigenvalues: Vec<f64> = Vec::new();
    let mut pure_states: Vec<State> = Vec::new();
    let mut remaining = 1.0;
    let mut cumulative = 0.0;
    let mut current = rho.clone();
    for step_index in 0..d {
        // The last admissible slot never needs a residual: terminating after
        // dim_operational steps only consumes the maximizer, and skipping the
        // final renormalizing division keeps ill-conditioned tails accurate.
        if step_index + 1 == d {
            let maximizer = maximize_pure_effect(&current, tol)?;
            let weight = maximizer.p_star * remaining;
            eigenvalues.push(weight);
            pure_states.push(maximizer.state);
            cumulative += weight;
            break;
        }
        let step = peel(&current, tol).map_err(|e| match e {
            Error::ResidualOutsideCone(msg) => Error::NotDiagonalizable(msg),
            other => other,
        })?;
        let weight = step.p_star * remaining;
        eigenvalues.push(weight);
        pure_states.push(step.alpha);
        cumulative += weight;
        remaining *= 1.0 - step.p_star;
        match step.residual {
            None => break,
            Some(sigma) => {
                if cumulative >= target - tol.peel_unit {
                    break;
                }
                current = sigma;
            }
        }
    }
    if (cumulative - target).abs() > tol.test_sum {
        return Err(Error::NotDiagonalizable(format!(
            "cumulative weight {cumulative} misses the state norm {target} after {} steps",
            eigenvalues.len()
        )));
    }
    // Distinguishability certificate through the unique daggers.
    let mut daggers = Vec::with_capacity(pure_states.len());
    for alpha in &pure_states {
        let a = dagger(alpha, tol).map_err(|e| match e {
            Error::DaggerNotUnique => Error::NotDiagonalizable(
                "the model has no unique dagger, so the distinguishing test is undefined".into(),
            ),
            other => other,
        })?;
        daggers.push(a);
    }
    for (i, a) in daggers.iter().enumerate() {
        for (j, alpha) in pure_states.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            let v = theory::pair_raw(a, alpha);
            if (v - expected).abs() > tol.distinguish {
                return Err(Error::NotDiagonalizable(format!(
                    "pairwise condition failed at ({i}, {j}): value {v}"
                )));
            }
        }
    }
    // Complete to a full observation-test when rank-deficient.
    let full_states = if pure_states.len() < d {
        complete_to_maximal(&pure_states, theory, tol)?
    } else {
        pure_states.clone()
    };
    let mut test_effects = daggers;
    for alpha in full_states.iter().skip(test_effects.len()) {
        test_effects.push(dagger(alpha, tol)?);
    }
    let test = ObservationTest::new(test_effects, tol).map_err(|_| {
        Error::NotDiagonalizable("completed daggers do not form an observation-test".into())
    })?;
    let test_effects = test.effects().to_vec();
    // Clamp float-noise negatives in the weights.
    let eigenvalues: Vec<f64> = eigenvalues
        .into_iter()
        .map(|p| if (-tol.pair_clamp..0.0).contains(&p) { 0.0 } else { p })
        .collect();
    for w in eigenvalues.windows(2) {
        if w[1] > w[0] + tol.spectrum_sorted {
            return Err(Error::NotDiagonalizable(format!(
                "weights not sorted: {} followed by {}",
                w[0], w[1]
            )));
        }
    }
    let mut recon = vec![0.0; theory.coord_len()];
    for (p, alpha) in eigenvalues.iter().zip(&pure_states) {
        for (r, a) in recon.iter_mut().zip(alpha.coords()) {
            *r += p * a;
        }
    }
    let reconstruction_error = recon
        .iter()
        .zip(rho.coords())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if reconstruction_error > tol.reconstruction {
        return Err(Error::NotDiagonalizable(format!(
            "reconstruction error {reconstruction_error:e} exceeds the band"
        )));
    }
    let steps = pure_states.len();
    Ok(Diagonalization { eigenvalues, pure_states, test_effects, reconstruction_error, steps })
}

/// Outcome of the perfect-distinguishability check.
#[derive(Clone, Debug)]
pub enum DistinguishOutcome {
    /// An observation-test achieving (a_j|rho_i) = delta_ij, completed to a
    /// maximal test when the input set is smaller than the dimension.
    Certificate(ObservationTest),
    /// The first violating pair and the offending pairing value.
    Violation { i: usize, j: usize, value: f64 },
}

/// Check that pure states are perfectly distinguishable and produce the
/// distinguishing test, built from daggers (or the gbit's per-corner pure
/// effects) plus completion.
pub fn verify_distinguishable(states: &[State], tol: &Tolerances) -> Result<DistinguishOutcome> {
    let theory = crate::theory::common_theory_of_states(states)?;
    match theory::distinguishing_effects(states, tol)? {
        DistinguishSearch::Violation { i, j, value } => {
            Ok(DistinguishOutcome::Violation { i, j, value })
        }
        DistinguishSearch::Found(_) => {
            let full = if states.len() < theory.dim_operational() {
                complete_to_maximal(states, theory, tol)?
            } else {
                states.to_vec()
            };
            match theory::distinguishing_effects(&full, tol)? {
                DistinguishSearch::Found(effects) => {
                    let test = ObservationTest::new(effects, tol)?;
                    Ok(DistinguishOutcome::Certificate(test))
                }
                DistinguishSearch::Violation { i, j, value } => {
                    Ok(DistinguishOutcome::Violation { i, j, value })
                }
            }
        }
    }
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    /// Sorted non-increasing.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector for `eigenvalues[k]`, with
    /// its largest-magnitude component positive.
    pub eigenvectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi eigensolver. The independent oracle for the quantum model.
pub fn eigensolve_symmetric(matrix: &Matrix, tol: &Tolerances) -> Result<SymmetricEigen> {
    if !matrix.is_square() {
        return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
    }
    if matrix.asymmetry() > tol.symmetry {
        return Err(Error::NotSymmetric);
    }
    let n = matrix.rows();
    let mut a = matrix.clone();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    let mut vecs = Matrix::identity(n);
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_frobenius(&a);
        if off < tol.jacobi_off {
            break;
        }
        if sweeps >= 100 {
            return Err(Error::NoConvergence);
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let mut g = Matrix::identity(n);
                g.set(p, p, c);
                g.set(p, q, s);
                g.set(q, p, -s);
                g.set(q, q, c);
                a = g.transpose().matmul(&a).matmul(&g);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                vecs = vecs.matmul(&g);
            }
        }
        sweeps += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .partial_cmp(&a.get(i, i))
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v = vecs.column(i);
            linalg::fix_sign(&mut v);
            v
        })
        .collect();
    Ok(SymmetricEigen { eigenvalues, eigenvectors })
}

fn off_diagonal_frobenius(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a.get(i, j) * a.get(i, j);
            }
        }
    }
    sum.sqrt()
}

impl SymmetricEigen {
    /// Reconstruct V Lambda V^T.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.eigenvalues.len();
        let mut m = Matrix::zeros(n, n);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, m.get(i, j) + lambda * v[i] * v[j]);
                }
            }
        }
        m
    }
}

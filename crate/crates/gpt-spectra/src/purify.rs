//! Purification, complementary states, and steering for the quantum model.
//!
//! A bipartite pure state is stored through its amplitude matrix W with
//! unit Frobenius norm; the state itself is vec(W) vec(W)^T in the product
//! representation. Marginals are W W^T on the system and W^T W on the
//! purifying system, so the two marginals share a spectrum by construction
//! of the singular value decomposition.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::spectral::{self, eigensolve_symmetric};
use crate::theory::{State, Theory};
use crate::tol::Tolerances;

/// A pure state of the composite system A x B, held as its amplitude matrix.
#[derive(Clone, Debug)]
pub struct BipartitePureState {
    system_dims: (usize, usize),
    amplitude: Matrix,
}

impl BipartitePureState {
    /// Validates the unit Frobenius norm.
    pub fn new(amplitude: Matrix, tol: &Tolerances) -> Result<Self> {
        let f = amplitude.frobenius();
        if (f * f - 1.0).abs() > tol.normalization {
            return Err(Error::InvalidState(format!(
                "amplitude matrix has squared Frobenius norm {}",
                f * f
            )));
        }
        Ok(BipartitePureState {
            system_dims: (amplitude.rows(), amplitude.cols()),
            amplitude,
        })
    }

    pub fn system_dims(&self) -> (usize, usize) {
        self.system_dims
    }

    pub fn amplitude(&self) -> &Matrix {
        &self.amplitude
    }

    /// Marginal on the system: W W^T.
    pub fn marginal_system(&self) -> State {
        let w = &self.amplitude;
        let m = w.matmul(&w.transpose());
        State::from_parts_unchecked(Theory::QuantumReal { dim: self.system_dims.0 }, m.into_data())
    }

    /// Marginal on the purifying system: W^T W.
    pub fn marginal_environment(&self) -> State {
        let w = &self.amplitude;
        let m = w.transpose().matmul(w);
        State::from_parts_unchecked(Theory::QuantumReal { dim: self.system_dims.1 }, m.into_data())
    }
}

/// Minimal purification of a quantum state: W = sum_i sqrt(p_i) v_i e_i^T
/// with the purifying dimension equal to the system dimension.
pub fn purify(rho: &State, tol: &Tolerances) -> Result<BipartitePureState> {
    let d = match rho.theory() {
        Theory::QuantumReal { dim } => dim,
        other => {
            return Err(Error::UnsupportedTheory {
                operation: "purification".into(),
                theory: other.name().into(),
            })
        }
    };
    if !rho.is_normalized(tol) {
        return Err(Error::NotNormalized { norm: rho.norm() });
    }
    let eig = eigensolve_symmetric(&rho.as_matrix()?, tol)?;
    let mut w = Matrix::zeros(d, d);
    for (i, (lambda, v)) in eig.eigenvalues.iter().zip(&eig.eigenvectors).enumerate() {
        let p = if (-tol.cone_quantum..0.0).contains(lambda) { 0.0 } else { *lambda };
        if p < 0.0 {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {p} beyond the cone band"
            )));
        }
        let root = p.sqrt();
        for (row, x) in v.iter().enumerate() {
            w.set(row, i, root * x);
        }
    }
    BipartitePureState::new(w, tol)
}

/// The complementary state: the marginal of the purification on the
/// purifying system.
pub fn complementary(psi: &BipartitePureState) -> State {
    psi.marginal_environment()
}

/// Steering effect and its achieved reproduction error.
#[derive(Clone, Debug)]
pub struct Steering {
    /// Effect on the purifying system preparing the component.
    pub effect: crate::theory::Effect,
    /// Max-norm of (W b W^T) minus p sigma.
    pub reproduction_error: f64,
}

/// Effect b on the purifying system with marginal_A((id x b) Psi) = p sigma.
///
/// Requires p sigma <= rho in the positive semidefinite order, where rho is
/// the marginal of `psi` on the system; components outside the support are
/// rejected as `NotContained`. The construction is b = p (W^+ sigma W^+T),
/// with the pseudo-inverse cut off below the configured singular value.
pub fn steer(
    psi: &BipartitePureState,
    sigma: &State,
    p: f64,
    tol: &Tolerances,
) -> Result<Steering> {
    let (d_a, d_b) = psi.system_dims();
    let sigma_dim = match sigma.theory() {
        Theory::QuantumReal { dim } => dim,
        other => {
            return Err(Error::UnsupportedTheory {
                operation: "steering".into(),
                theory: other.name().into(),
            })
        }
    };
    if sigma_dim != d_a {
        return Err(Error::DimensionMismatch(format!(
            "component dimension {sigma_dim} does not match system dimension {d_a}"
        )));
    }
    if !(0.0..=1.0 + tol.pair_clamp).contains(&p) || p == 0.0 {
        return Err(Error::OutOfRange { value: p });
    }
    let rho = psi.marginal_system().as_matrix()?;
    let sigma_m = sigma.as_matrix()?;
    let gap = rho.sub(&sigma_m.scale(p));
    if linalg::min_eigenvalue(&gap) < -tol.psd_order {
        return Err(Error::NotContained);
    }
    let w = psi.amplitude();
    let w_pinv = pseudo_inverse(w, tol)?;
    // b = p (W^+ sigma W^+T); symmetric already, transpose kept for the
    // representation convention.
    let b = w_pinv.matmul(&sigma_m).matmul(&w_pinv.transpose()).scale(p).transpose();
    let effect = crate::theory::Effect::new(
        Theory::QuantumReal { dim: d_b },
        b.data().to_vec(),
        tol,
    )?;
    let reproduced = w.matmul(&b).matmul(&w.transpose());
    let reproduction_error = reproduced.max_abs_diff(&sigma_m.scale(p));
    if reproduction_error > tol.steering {
        return Err(Error::NotContained);
    }
    Ok(Steering { effect, reproduction_error })
}

/// Moore-Penrose pseudo-inverse through the symmetric eigensolver:
/// W = U S V^T from the eigendecomposition of W^T W, then W^+ = V S^+ U^T.
fn pseudo_inverse(w: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let gram = w.transpose().matmul(w);
    let eig = spectral::eigensolve_symmetric(&gram, tol)?;
    let mut pinv = Matrix::zeros(w.cols(), w.rows());
    for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
        let s = lambda.max(0.0).sqrt();
        if s <= tol.pinv_cutoff {
            continue;
        }
        let u: Vec<f64> = w.mat_vec(v).iter().map(|x| x / s).collect();
        for i in 0..w.cols() {
            for j in 0..w.rows() {
                pinv.set(i, j, pinv.get(i, j) + v[i] * u[j] / s);
            }
        }
    }
    Ok(pinv)
}

/// Both routes to the maximal pure weight: from the state and from its
/// complementary state.
#[derive(Clone, Debug)]
pub struct PStarReport {
    pub p_star_state: f64,
    pub p_star_complementary: f64,
    pub difference: f64,
}

/// Computes p_star(rho) and p_star of the complementary state of the minimal
/// purification, reporting both and their absolute difference.
pub fn verify_pstar_equality(rho: &State, tol: &Tolerances) -> Result<PStarReport> {
    let direct = spectral::p_star(rho, tol)?;
    let comp = complementary(&purify(rho, tol)?);
    let through_env = spectral::p_star(&comp, tol)?;
    Ok(PStarReport {
        p_star_state: direct,
        p_star_complementary: through_env,
        difference: (direct - through_env).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::theory::invariant_state;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn qstate(rows: &[Vec<f64>]) -> State {
        State::quantum(&Matrix::from_rows(rows).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn purify_pure_state_is_product() {
        let v = linalg::normalize(&[0.6, 0.8]);
        let rho = State::from_parts_unchecked(
            Theory::QuantumReal { dim: 2 },
            Matrix::outer(&v).into_data(),
        );
        let psi = purify(&rho, &tol()).unwrap();
        // W = v e_1^T: a single nonzero column. The zero column carries the
        // square root of a numerically-zero eigenvalue, hence the 1e-7 band.
        let w = psi.amplitude();
        for i in 0..2 {
            assert!((w.get(i, 0).abs() - v[i].abs()).abs() < 1e-10);
            assert!(w.get(i, 1).abs() < 1e-7);
        }
        let comp = complementary(&psi);
        assert!((comp.coords()[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purify_invariant_state_is_maximally_correlated() {
        let chi = invariant_state(Theory::QuantumReal { dim: 2 });
        let psi = purify(&chi, &tol()).unwrap();
        let expected = Matrix::identity(2).scale(std::f64::consts::FRAC_1_SQRT_2);
        assert!(psi.amplitude().max_abs_diff(&expected) < 1e-12);
        let comp = complementary(&psi);
        assert!(comp.max_abs_diff(&chi) < 1e-12);
    }

    #[test]
    fn purify_diagonal_state() {
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        let psi = purify(&rho, &tol()).unwrap();
        let expected = Matrix::from_rows(&[
            vec![0.7_f64.sqrt(), 0.0],
            vec![0.0, 0.3_f64.sqrt()],
        ])
        .unwrap();
        assert!(psi.amplitude().max_abs_diff(&expected) < 1e-12);
        let comp = complementary(&psi);
        assert!(comp.max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn marginal_consistency_on_random_states() {
        let mut rng = sample::rng_from_seed(13);
        for d in 2..=6 {
            for _ in 0..10 {
                let m = sample::random_density(d, &mut rng);
                let rho = State::quantum(&m, &tol()).unwrap();
                let psi = purify(&rho, &tol()).unwrap();
                assert!(psi.marginal_system().max_abs_diff(&rho) < 1e-10);
            }
        }
    }

    #[test]
    fn steer_full_state_gives_support_unit() {
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        let psi = purify(&rho, &tol()).unwrap();
        let s = steer(&psi, &rho, 1.0, &tol()).unwrap();
        // Full-rank marginal: the steering effect is the unit on B.
        let m = Matrix::from_flat(2, 2, s.effect.coords().to_vec()).unwrap();
        assert!(m.max_abs_diff(&Matrix::identity(2)) < 1e-8);
        assert!(s.reproduction_error < 1e-10);
    }

    #[test]
    fn steer_diagonal_component() {
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        let psi = purify(&rho, &tol()).unwrap();
        let sigma = qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let s = steer(&psi, &sigma, 0.7, &tol()).unwrap();
        let expected = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let m = Matrix::from_flat(2, 2, s.effect.coords().to_vec()).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-8);
    }

    #[test]
    fn steer_maximally_correlated_prepares_projector() {
        let chi = invariant_state(Theory::QuantumReal { dim: 2 });
        let psi = purify(&chi, &tol()).unwrap();
        let sigma = qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let s = steer(&psi, &sigma, 0.5, &tol()).unwrap();
        let expected = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let m = Matrix::from_flat(2, 2, s.effect.coords().to_vec()).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-8);
    }

    #[test]
    fn steer_rejects_uncontained_components() {
        let rho = qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let psi = purify(&rho, &tol()).unwrap();
        let sigma = qstate(&[vec![0.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(
            steer(&psi, &sigma, 0.5, &tol()),
            Err(Error::NotContained)
        ));
    }

    #[test]
    fn pstar_equality_examples() {
        let pure = qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let r = verify_pstar_equality(&pure, &tol()).unwrap();
        assert!((r.p_star_state - 1.0).abs() < 1e-10);
        assert!(r.difference < 1e-10);

        let chi = invariant_state(Theory::QuantumReal { dim: 3 });
        let r = verify_pstar_equality(&chi, &tol()).unwrap();
        assert!((r.p_star_state - 1.0 / 3.0).abs() < 1e-10);
        assert!(r.difference < 1e-10);

        let mut rng = sample::rng_from_seed(5);
        let m = sample::random_density(4, &mut rng);
        let rho = State::quantum(&m, &tol()).unwrap();
        let r = verify_pstar_equality(&rho, &tol()).unwrap();
        assert!(r.difference <= 1e-9);
    }

    #[test]
    fn purifications_differ_by_a_reversible_channel() {
        // Two equal-dimension purifications of the same full-rank state are
        // related by an orthogonal transformation of the purifying system,
        // recovered by aligning the amplitude matrices.
        let mut rng = sample::rng_from_seed(29);
        let m = sample::random_density(3, &mut rng);
        let rho = State::quantum(&m, &tol()).unwrap();
        let psi = purify(&rho, &tol()).unwrap();
        let o = sample::random_orthogonal(3, &mut rng);
        let w_other = psi.amplitude().matmul(&o.transpose());
        let psi_other = BipartitePureState::new(w_other.clone(), &tol()).unwrap();
        assert!(psi_other.marginal_system().max_abs_diff(&rho) < 1e-10);
        // Recover U from W^+ W'.
        let w_pinv = pseudo_inverse(psi.amplitude(), &tol()).unwrap();
        let u_t = w_pinv.matmul(&w_other);
        let gram = u_t.transpose().matmul(&u_t);
        assert!(gram.max_abs_diff(&Matrix::identity(3)) < 1e-8);
        assert!(psi.amplitude().matmul(&u_t).max_abs_diff(&w_other) < 1e-8);
    }

    #[test]
    fn faithfulness_of_full_rank_marginals() {
        // For full-rank rho the map b -> W b W^T has full column rank; for a
        // rank-deficient rho it does not.
        let mut rng = sample::rng_from_seed(17);
        let m = sample::random_density(3, &mut rng);
        let rho = State::quantum(&m, &tol()).unwrap();
        let psi = purify(&rho, &tol()).unwrap();
        let w = psi.amplitude();
        let d = 3;
        let mut map = Matrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                // Image of the basis matrix E_ab.
                for i in 0..d {
                    for j in 0..d {
                        map.set(i * d + j, a * d + b, w.get(i, a) * w.get(j, b));
                    }
                }
            }
        }
        assert_eq!(map.rank(tol().rank), d * d);

        let degenerate = qstate(&[
            vec![0.5, 0.0, 0.0],
            vec![0.0, 0.5, 0.0],
            vec![0.0, 0.0, 0.0],
        ]);
        let psi = purify(&degenerate, &tol()).unwrap();
        let w = psi.amplitude();
        let mut map = Matrix::zeros(d * d, d * d);
        for a in 0..d {
            for b in 0..d {
                for i in 0..d {
                    for j in 0..d {
                        map.set(i * d + j, a * d + b, w.get(i, a) * w.get(j, b));
                    }
                }
            }
        }
        assert!(map.rank(tol().rank) < d * d);
    }
}

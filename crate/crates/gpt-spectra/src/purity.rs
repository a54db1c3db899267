//! The resource theory of purity: random-reversible channels, the mixedness
//! preorder decided through spectrum majorization, and explicit synthesis of
//! a converting channel when the criterion holds.

use rand::Rng;

use crate::axioms::{check_strong_symmetry, CheckVerdict};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::majorize::{
    birkhoff, first_violating_index, majorizes, transfer_matrix, Spectrum,
};
use crate::sample;
use crate::spectral::{diagonalize, Diagonalization};
use crate::theory::{complete_to_maximal, ReversibleChannel, State, Theory};
use crate::tol::Tolerances;

/// A random-reversible channel: a convex mixture of reversible channels.
#[derive(Clone, Debug)]
pub struct RaReChannel {
    weights: Vec<f64>,
    channels: Vec<ReversibleChannel>,
}

impl RaReChannel {
    pub fn new(
        weights: Vec<f64>,
        channels: Vec<ReversibleChannel>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if weights.is_empty() || weights.len() != channels.len() {
            return Err(Error::LengthMismatch(weights.len(), channels.len()));
        }
        let theory = channels[0].theory();
        for c in &channels {
            if c.theory() != theory {
                return Err(Error::DimensionMismatch("channels on different theories".into()));
            }
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidState(format!("invalid weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > tol.rare_weight_sum {
            return Err(Error::InvalidState(format!("weights sum to {sum}")));
        }
        Ok(RaReChannel { weights, channels })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn channels(&self) -> &[ReversibleChannel] {
        &self.channels
    }

    pub fn theory(&self) -> Theory {
        self.channels[0].theory()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// R(rho) = sum_k w_k U_k(rho).
    pub fn apply(&self, rho: &State) -> Result<State> {
        let mut acc = vec![0.0; rho.coords().len()];
        for (w, ch) in self.weights.iter().zip(&self.channels) {
            let moved = ch.apply(rho)?;
            for (a, x) in acc.iter_mut().zip(moved.coords()) {
                *a += w * x;
            }
        }
        Ok(State::from_parts_unchecked(rho.theory(), acc))
    }

    /// self after inner; the mixture of all pairwise compositions.
    pub fn compose(&self, inner: &RaReChannel) -> Result<RaReChannel> {
        let mut weights = Vec::with_capacity(self.len() * inner.len());
        let mut channels = Vec::with_capacity(self.len() * inner.len());
        for (wo, co) in self.weights.iter().zip(&self.channels) {
            for (wi, ci) in inner.weights.iter().zip(&inner.channels) {
                weights.push(wo * wi);
                channels.push(co.compose(ci)?);
            }
        }
        Ok(RaReChannel { weights, channels })
    }
}

/// Free function mirror of `RaReChannel::apply`.
pub fn apply_rare(r: &RaReChannel, rho: &State) -> Result<State> {
    r.apply(rho)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    MoreMixed,
    EquallyMixed,
    NotMoreMixed,
}

/// The witness backing a convertibility verdict.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Channel with R(sigma) = rho.
    Rare(RaReChannel),
    /// Single reversible channel with U(sigma) = rho (equal spectra).
    Reversible(ReversibleChannel),
    /// 1-based index of the first violated partial sum.
    ViolatingIndex(usize),
}

#[derive(Clone, Debug)]
pub struct ConvertibilityCertificate {
    pub verdict: Verdict,
    pub witness: Witness,
    /// Max-norm of witness(sigma) - rho for positive verdicts; the size of
    /// the partial-sum violation otherwise.
    pub residual_error: f64,
}

fn require_strong_symmetry(theory: Theory, tol: &Tolerances) -> Result<()> {
    let check = check_strong_symmetry(theory, 4, 0x5eed, tol);
    if check.verdict == CheckVerdict::Fail {
        return Err(Error::StrongSymmetryFailed);
    }
    Ok(())
}

/// Decide whether rho is more mixed than sigma and certify the verdict.
///
/// Diagonalizes both states, compares padded spectra, and produces either a
/// single reversible witness (equal spectra), a synthesized RaRe witness
/// (strict majorization), or the first violated partial-sum index.
pub fn is_more_mixed(
    rho: &State,
    sigma: &State,
    tol: &Tolerances,
) -> Result<ConvertibilityCertificate> {
    if rho.theory() != sigma.theory() {
        return Err(Error::DimensionMismatch("states on different theories".into()));
    }
    require_strong_symmetry(rho.theory(), tol)?;
    let d = rho.theory().dim_operational();
    let diag_rho = diagonalize(rho, tol)?;
    let diag_sigma = diagonalize(sigma, tol)?;
    let p = Spectrum::from_diagonalization(&diag_rho, d, tol)?;
    let q = Spectrum::from_diagonalization(&diag_sigma, d, tol)?;
    if p.approx_eq(&q, tol.spectra_equal) {
        let u = basis_change_channel(&diag_rho, &diag_sigma, rho.theory(), tol)?;
        let residual_error = u.apply(sigma)?.max_abs_diff(rho);
        return Ok(ConvertibilityCertificate {
            verdict: Verdict::EquallyMixed,
            witness: Witness::Reversible(u),
            residual_error,
        });
    }
    if majorizes(&q, &p, tol)? {
        let r = synthesize_from_diagonalizations(rho.theory(), &diag_rho, &diag_sigma, tol)?;
        let residual_error = r.apply(sigma)?.max_abs_diff(rho);
        return Ok(ConvertibilityCertificate {
            verdict: Verdict::MoreMixed,
            witness: Witness::Rare(r),
            residual_error,
        });
    }
    let index = first_violating_index(&q, &p, tol).unwrap_or(d);
    let (mut sp, mut sq) = (0.0, 0.0);
    for k in 0..index.min(d) {
        sp += p.values()[k];
        sq += q.values()[k];
    }
    Ok(ConvertibilityCertificate {
        verdict: Verdict::NotMoreMixed,
        witness: Witness::ViolatingIndex(index),
        residual_error: (sp - sq).max(0.0),
    })
}

/// Synthesize a RaRe channel R with R(sigma) = rho, assuming the spectrum of
/// sigma majorizes the spectrum of rho.
///
/// The construction follows the converse direction of the majorization
/// criterion: connect the two eigenbases with a reversible channel U, write
/// the transfer matrix between the spectra as a mixture of permutations, and
/// realize each permutation on the target eigenbasis as a reversible V_k;
/// the mixture of V_k U is the witness.
pub fn synthesize_rare(rho: &State, sigma: &State, tol: &Tolerances) -> Result<RaReChannel> {
    if rho.theory() != sigma.theory() {
        return Err(Error::DimensionMismatch("states on different theories".into()));
    }
    require_strong_symmetry(rho.theory(), tol)?;
    let diag_rho = diagonalize(rho, tol)?;
    let diag_sigma = diagonalize(sigma, tol)?;
    let r = synthesize_from_diagonalizations(rho.theory(), &diag_rho, &diag_sigma, tol)?;
    let err = r.apply(sigma)?.max_abs_diff(rho);
    if err > tol.synthesis {
        return Err(Error::SynthesisVerificationFailed(err));
    }
    Ok(r)
}

fn synthesize_from_diagonalizations(
    theory: Theory,
    diag_rho: &Diagonalization,
    diag_sigma: &Diagonalization,
    tol: &Tolerances,
) -> Result<RaReChannel> {
    let d = theory.dim_operational();
    let p = Spectrum::from_diagonalization(diag_rho, d, tol)?;
    let q = Spectrum::from_diagonalization(diag_sigma, d, tol)?;
    if !majorizes(&q, &p, tol)? {
        return Err(Error::NotMajorized);
    }
    let psi = completed_basis(diag_rho, theory, tol)?;
    let transfer = transfer_matrix(&p, &q, tol)?;
    let decomposition = birkhoff(&transfer, tol)?;
    let connector = basis_change_channel(diag_rho, diag_sigma, theory, tol)?;
    let mut weights = Vec::with_capacity(decomposition.len());
    let mut channels = Vec::with_capacity(decomposition.len());
    for (lambda, perm) in decomposition
        .weights
        .iter()
        .zip(&decomposition.permutations)
    {
        let v_k = permutation_on_basis(&psi, perm, theory, tol)?;
        weights.push(*lambda);
        channels.push(v_k.compose(&connector)?);
    }
    RaReChannel::new(weights, channels, tol)
}

/// Eigenbasis of a diagonalization completed to a maximal set.
fn completed_basis(
    diag: &Diagonalization,
    theory: Theory,
    tol: &Tolerances,
) -> Result<Vec<State>> {
    if diag.pure_states.len() < theory.dim_operational() {
        complete_to_maximal(&diag.pure_states, theory, tol)
    } else {
        Ok(diag.pure_states.clone())
    }
}

/// Reversible channel U with U phi_i = psi_i for the completed eigenbases of
/// the two diagonalizations, matched index by index (both sorted by weight).
fn basis_change_channel(
    diag_to: &Diagonalization,
    diag_from: &Diagonalization,
    theory: Theory,
    tol: &Tolerances,
) -> Result<ReversibleChannel> {
    let to_states = completed_basis(diag_to, theory, tol)?;
    let from_states = completed_basis(diag_from, theory, tol)?;
    match theory {
        Theory::QuantumReal { dim } => {
            let mut o = Matrix::zeros(dim, dim);
            for (t, f) in to_states.iter().zip(&from_states) {
                let (vt, _) = linalg::rank_one_factor(&t.as_matrix()?)?;
                let (vf, _) = linalg::rank_one_factor(&f.as_matrix()?)?;
                for r in 0..dim {
                    for c in 0..dim {
                        o.set(r, c, o.get(r, c) + vt[r] * vf[c]);
                    }
                }
            }
            ReversibleChannel::orthogonal(theory, o, tol)
        }
        Theory::Classical { dim } => {
            let mut perm = vec![0; dim];
            for (t, f) in to_states.iter().zip(&from_states) {
                let target = crate::theory::classical_vertex_index(t, tol)?;
                let source = crate::theory::classical_vertex_index(f, tol)?;
                perm[source] = target;
            }
            ReversibleChannel::permutation(theory, perm)
        }
        Theory::Gbit => Err(Error::UnsupportedTheory {
            operation: "basis-change synthesis".into(),
            theory: theory.name().into(),
        }),
    }
}

/// Reversible channel sending basis_j to basis_{perm[j]} for a maximal set.
fn permutation_on_basis(
    basis: &[State],
    perm: &[usize],
    theory: Theory,
    tol: &Tolerances,
) -> Result<ReversibleChannel> {
    match theory {
        Theory::QuantumReal { dim } => {
            let mut vectors = Vec::with_capacity(basis.len());
            for s in basis {
                let (v, _) = linalg::rank_one_factor(&s.as_matrix()?)?;
                vectors.push(v);
            }
            let mut o = Matrix::zeros(dim, dim);
            for (j, &target) in perm.iter().enumerate() {
                for r in 0..dim {
                    for c in 0..dim {
                        o.set(r, c, o.get(r, c) + vectors[target][r] * vectors[j][c]);
                    }
                }
            }
            ReversibleChannel::orthogonal(theory, o, tol)
        }
        Theory::Classical { dim } => {
            let indices: Vec<usize> = basis
                .iter()
                .map(|s| crate::theory::classical_vertex_index(s, tol))
                .collect::<Result<_>>()?;
            let mut full = vec![0; dim];
            for (j, &target) in perm.iter().enumerate() {
                full[indices[j]] = indices[target];
            }
            ReversibleChannel::permutation(theory, full)
        }
        Theory::Gbit => Err(Error::UnsupportedTheory {
            operation: "basis permutation synthesis".into(),
            theory: theory.name().into(),
        }),
    }
}

/// Seeded random RaRe channel: normalized uniform weights and uniform random
/// reversible channels. Fully reproducible from the seed.
pub fn random_rare(theory: Theory, n_terms: usize, seed: u64) -> RaReChannel {
    assert!(n_terms >= 1, "a RaRe channel needs at least one term");
    let mut rng = sample::rng_from_seed(seed);
    let mut weights: Vec<f64> = (0..n_terms).map(|_| rng.random::<f64>() + 1e-12).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let channels: Vec<ReversibleChannel> = (0..n_terms)
        .map(|_| sample::random_reversible(theory, &mut rng))
        .collect();
    RaReChannel { weights, channels }
}

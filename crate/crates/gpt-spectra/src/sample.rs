//! Seeded generators for states, channels, bases, and doubly stochastic
//! matrices. Everything is reproducible from an explicit seed; there is no
//! hidden RNG state anywhere in the crate.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, Matrix};
use crate::majorize::Spectrum;
use crate::theory::{Dihedral, ReversibleChannel, State, Theory};
use crate::tol::Tolerances;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal variate by Box-Muller; draws two uniforms per call.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Random orthogonal matrix: modified Gram-Schmidt on a Gaussian matrix.
/// MGS pivots are positive by construction, so the output is deterministic
/// in the seed with no residual sign freedom.
pub fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let basis = random_orthonormal_basis(d, rng);
    let mut o = Matrix::zeros(d, d);
    for (j, v) in basis.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            o.set(i, j, *x);
        }
    }
    o
}

/// Random orthonormal basis of R^d, as a list of column vectors.
pub fn random_orthonormal_basis(d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    while basis.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for b in &basis {
                let c = linalg::dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = linalg::norm(&v);
        if n > 1e-8 {
            basis.push(v.iter().map(|x| x / n).collect());
        }
    }
    basis
}

/// Random full-rank density matrix: A A^T normalized to unit trace, mixed
/// with a 5% share of the invariant state.
///
/// The mixture floors the smallest eigenvalue at 0.05/d. Raw Wishart draws
/// can be conditioned arbitrarily badly, and peeling a state whose tail
/// weight sits at the noise floor aborts by design; the generator's job is
/// to exercise the algorithms, not that limit.
pub fn random_density(d: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut a = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            a.set(i, j, gaussian(rng));
        }
    }
    let m = a.matmul(&a.transpose());
    let wishart = m.scale(0.95 / m.trace());
    wishart.add(&Matrix::identity(d).scale(0.05 / d as f64))
}

/// Random normalized state of the model.
pub fn random_state(theory: Theory, rng: &mut ChaCha8Rng) -> State {
    match theory {
        Theory::QuantumReal { dim } => {
            let m = random_density(dim, rng);
            State::from_parts_unchecked(theory, m.into_data())
        }
        Theory::Classical { dim } => {
            let mut p: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-12).collect();
            let s: f64 = p.iter().sum();
            for x in p.iter_mut() {
                *x /= s;
            }
            State::from_parts_unchecked(theory, p)
        }
        Theory::Gbit => {
            let x = 2.0 * rng.random::<f64>() - 1.0;
            let y = 2.0 * rng.random::<f64>() - 1.0;
            State::from_parts_unchecked(theory, vec![1.0, x, y])
        }
    }
}

pub fn random_permutation(d: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Uniform random reversible channel of the model.
pub fn random_reversible(theory: Theory, rng: &mut ChaCha8Rng) -> ReversibleChannel {
    match theory {
        Theory::QuantumReal { dim } => {
            ReversibleChannel::orthogonal(theory, random_orthogonal(dim, rng), &Tolerances::default())
                .expect("Gram-Schmidt output is orthogonal")
        }
        Theory::Classical { dim } => {
            ReversibleChannel::permutation(theory, random_permutation(dim, rng))
                .expect("Fisher-Yates output is a permutation")
        }
        Theory::Gbit => {
            let all = Dihedral::all();
            let idx = rng.random_range(0..all.len());
            ReversibleChannel::dihedral(all[idx])
        }
    }
}

/// Doubly stochastic matrix: the normalized sum of `n_perms` random
/// permutation matrices.
pub fn random_doubly_stochastic(d: usize, n_perms: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for _ in 0..n_perms {
        let perm = random_permutation(d, rng);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, m.get(i, j) + 1.0);
        }
    }
    m.scale(1.0 / n_perms as f64)
}

/// Random sorted spectrum: normalized shifted uniforms, non-increasing.
/// The 0.05 shift keeps the smallest entry well above the noise floor of
/// the peeling chain.
pub fn random_spectrum(d: usize, rng: &mut ChaCha8Rng) -> Spectrum {
    let mut v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() + 0.05).collect();
    let s: f64 = v.iter().sum();
    for x in v.iter_mut() {
        *x /= s;
    }
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Spectrum::new(v, &Tolerances::default()).expect("normalized and sorted by construction")
}

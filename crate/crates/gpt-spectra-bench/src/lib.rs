//! Shared fixtures for the benchmark targets.

use gpt_spectra::linalg::Matrix;
use gpt_spectra::sample;
use gpt_spectra::theory::State;
use gpt_spectra::Tolerances;

/// Deterministic batch of random quantum states for one dimension.
pub fn quantum_states(dim: usize, count: usize, seed: u64) -> Vec<State> {
    let tol = Tolerances::default();
    let mut rng = sample::rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let m = sample::random_density(dim, &mut rng);
            State::quantum(&m, &tol).expect("generator output is a state")
        })
        .collect()
}

/// Deterministic batch of doubly stochastic matrices.
pub fn stochastic_matrices(dim: usize, count: usize, seed: u64) -> Vec<Matrix> {
    let mut rng = sample::rng_from_seed(seed);
    (0..count)
        .map(|_| sample::random_doubly_stochastic(dim, 2 * dim, &mut rng))
        .collect()
}

/// A majorization-ordered pair of states with random eigenbases.
pub fn ordered_state_pair(dim: usize, seed: u64) -> (State, State) {
    let tol = Tolerances::default();
    let mut rng = sample::rng_from_seed(seed);
    let q = sample::random_spectrum(dim, &mut rng);
    let mix = sample::random_doubly_stochastic(dim, dim, &mut rng);
    let p = gpt_spectra::Spectrum::from_unsorted(mix.mat_vec(q.values()), &tol)
        .expect("mixing preserves normalization");
    let build = |weights: &[f64], basis: &[Vec<f64>]| {
        let mut m = Matrix::zeros(dim, dim);
        for (w, v) in weights.iter().zip(basis) {
            m = m.add(&Matrix::outer(v).scale(*w));
        }
        State::quantum(&m, &tol).expect("convex mix of projectors")
    };
    let sigma = build(q.values(), &sample::random_orthonormal_basis(dim, &mut rng));
    let rho = build(p.values(), &sample::random_orthonormal_basis(dim, &mut rng));
    (rho, sigma)
}

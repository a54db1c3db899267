//! State diagonalization and majorization toolkit for finite-dimensional
//! probabilistic theory models.
//!
//! Three concrete models are provided: real quantum theory, classical
//! probability, and the square-state-space gbit. The crate implements
//! operational diagonalization by pure-effect peeling with an independent
//! Jacobi eigensolver as cross-check, the majorization criterion for state
//! convertibility under random-reversible channels including explicit
//! channel synthesis, purification and steering for the quantum model, and
//! executable checks of the underlying structural assumptions per model.

// Dense matrix kernels read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod axioms;
pub mod error;
pub mod io;
pub mod linalg;
pub mod majorize;
pub mod purify;
pub mod purity;
pub mod sample;
pub mod spectral;
pub mod theory;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use majorize::{BirkhoffDecomposition, Spectrum};
pub use purity::{ConvertibilityCertificate, RaReChannel, Verdict, Witness};
pub use spectral::{Diagonalization, PeelStep, SymmetricEigen};
pub use theory::{
    deterministic_effect, invariant_state, Dihedral, Effect, ObservationTest, ReversibleChannel,
    State, Theory,
};
pub use tol::Tolerances;

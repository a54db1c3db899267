//! The three concrete theory models and their elementary operations.
//!
//! Each model is a finite-dimensional probabilistic theory given by a real
//! linear representation:
//!
//! * `quantum_real` — states are real symmetric positive semidefinite d x d
//!   matrices with unit trace, effects are symmetric matrices with spectrum
//!   in [0, 1], and the pairing is the trace inner product. Reversible
//!   channels act by orthogonal conjugation.
//! * `classical` — states are probability vectors on d outcomes, effects are
//!   entrywise [0, 1] vectors, and reversible channels are permutations.
//! * `gbit` — the square state space: coordinates (t, x, y) with |x|, |y| <= t,
//!   four pure corner states, four nontrivial extreme effects, and the dihedral
//!   group of the square as reversible channels. It serves as the negative
//!   control: pure effects attain 1 on a whole edge, so the unique-dagger
//!   correspondence fails.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::tol::Tolerances;

/// A finite-dimensional theory model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theory {
    QuantumReal { dim: usize },
    Classical { dim: usize },
    Gbit,
}

impl Theory {
    pub fn name(&self) -> &'static str {
        match self {
            Theory::QuantumReal { .. } => "quantum_real",
            Theory::Classical { .. } => "classical",
            Theory::Gbit => "gbit",
        }
    }

    /// Dimension of the real linear span of the state set: d(d+1)/2 symmetric
    /// matrix dimensions for quantum, d for classical, 3 for the gbit.
    pub fn dim_linear(&self) -> usize {
        match self {
            Theory::QuantumReal { dim } => dim * (dim + 1) / 2,
            Theory::Classical { dim } => *dim,
            Theory::Gbit => 3,
        }
    }

    /// Size of maximal perfectly distinguishable pure sets.
    pub fn dim_operational(&self) -> usize {
        match self {
            Theory::QuantumReal { dim } | Theory::Classical { dim } => *dim,
            Theory::Gbit => 2,
        }
    }

    /// Length of the coordinate vector states and effects are stored in.
    /// Quantum matrices are stored densely, so this exceeds `dim_linear`.
    pub fn coord_len(&self) -> usize {
        match self {
            Theory::QuantumReal { dim } => dim * dim,
            Theory::Classical { dim } => *dim,
            Theory::Gbit => 3,
        }
    }

    pub fn has_unique_dagger(&self) -> bool {
        !matches!(self, Theory::Gbit)
    }

    pub fn has_purification(&self) -> bool {
        matches!(self, Theory::QuantumReal { .. })
    }

    pub fn pure_effects_finite(&self) -> bool {
        !matches!(self, Theory::QuantumReal { .. })
    }

    /// Generators of the reversible group, enough to certify invariance.
    ///
    /// Quantum: plane rotations in adjacent coordinate planes plus one
    /// reflection. Classical: adjacent transpositions plus the full cycle.
    /// Gbit: the quarter-turn and the x-axis reflection.
    pub fn group_generators(&self) -> Vec<ReversibleChannel> {
        match self {
            Theory::QuantumReal { dim } => {
                let d = *dim;
                let mut gens = Vec::new();
                let angle = 0.7_f64;
                for i in 0..d.saturating_sub(1) {
                    let mut o = Matrix::identity(d);
                    o.set(i, i, angle.cos());
                    o.set(i, i + 1, -angle.sin());
                    o.set(i + 1, i, angle.sin());
                    o.set(i + 1, i + 1, angle.cos());
                    gens.push(ReversibleChannel::orthogonal_unchecked(*self, o));
                }
                let mut r = Matrix::identity(d);
                r.set(0, 0, -1.0);
                gens.push(ReversibleChannel::orthogonal_unchecked(*self, r));
                gens
            }
            Theory::Classical { dim } => {
                let d = *dim;
                let mut gens = Vec::new();
                for i in 0..d.saturating_sub(1) {
                    let mut p: Vec<usize> = (0..d).collect();
                    p.swap(i, i + 1);
                    gens.push(ReversibleChannel::permutation_unchecked(*self, p));
                }
                if d > 1 {
                    let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
                    gens.push(ReversibleChannel::permutation_unchecked(*self, cycle));
                }
                gens
            }
            Theory::Gbit => vec![
                ReversibleChannel::dihedral(Dihedral { rotation: 1, reflect: false }),
                ReversibleChannel::dihedral(Dihedral { rotation: 0, reflect: true }),
            ],
        }
    }

    /// All extreme normalized states, for the models where they are finite.
    pub fn extreme_states(&self) -> Option<Vec<State>> {
        match self {
            Theory::QuantumReal { .. } => None,
            Theory::Classical { dim } => {
                Some((0..*dim).map(|i| classical_vertex(*dim, i)).collect())
            }
            Theory::Gbit => Some(gbit_corners()),
        }
    }
}

/// Corner order for the gbit square, fixed for deterministic tie-breaks.
pub const GBIT_CORNERS: [(f64, f64); 4] = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];

/// The two maximal perfectly distinguishable pure sets of the gbit: the
/// diagonal corner pairs. No general maximal-set search is attempted for
/// polytope models.
pub const GBIT_MAXIMAL_PAIRS: [(usize, usize); 2] = [(0, 3), (1, 2)];

/// The four corner states in `GBIT_CORNERS` order.
pub fn gbit_corners() -> Vec<State> {
    GBIT_CORNERS
        .iter()
        .map(|&(x, y)| State::from_parts_unchecked(Theory::Gbit, vec![1.0, x, y]))
        .collect()
}

/// The nontrivial extreme effects of the gbit square, in a fixed order:
/// (1+x)/2, (1-x)/2, (1+y)/2, (1-y)/2. The set is closed under complement.
pub fn gbit_extreme_effects() -> Vec<Effect> {
    [
        [0.5, 0.5, 0.0],
        [0.5, -0.5, 0.0],
        [0.5, 0.0, 0.5],
        [0.5, 0.0, -0.5],
    ]
    .iter()
    .map(|c| Effect::from_parts_unchecked(Theory::Gbit, c.to_vec()))
    .collect()
}

fn classical_vertex(dim: usize, index: usize) -> State {
    let mut coords = vec![0.0; dim];
    coords[index] = 1.0;
    State::from_parts_unchecked(Theory::Classical { dim }, coords)
}

/// A state: a coordinate vector in the theory's linear representation.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    theory: Theory,
    coords: Vec<f64>,
}

/// An effect: the dual vector paired with states by the representation's
/// inner product (trace inner product for quantum).
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    theory: Theory,
    coords: Vec<f64>,
}

impl State {
    /// Validates shape, finiteness, cone membership, and norm range.
    pub fn new(theory: Theory, coords: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if coords.len() != theory.coord_len() {
            return Err(Error::DimensionMismatch(format!(
                "state for {} needs {} coordinates, got {}",
                theory.name(),
                theory.coord_len(),
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("non-finite coordinate".into()));
        }
        if let Theory::QuantumReal { dim } = theory {
            let m = Matrix::from_flat(dim, dim, coords.clone())?;
            if m.asymmetry() > tol.symmetry {
                return Err(Error::NotSymmetric);
            }
        }
        let violation = cone_violation(theory, &coords);
        let band = cone_band(theory, tol);
        if violation > band {
            return Err(Error::InvalidState(format!(
                "outside the {} state cone by {:e}",
                theory.name(),
                violation
            )));
        }
        let s = State { theory, coords };
        let norm = s.norm();
        if !(-band..=1.0 + tol.normalization).contains(&norm) {
            return Err(Error::InvalidState(format!("norm {norm} outside [0, 1]")));
        }
        Ok(s)
    }

    pub fn quantum(matrix: &Matrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare { rows: matrix.rows(), cols: matrix.cols() });
        }
        let dim = matrix.rows();
        State::new(Theory::QuantumReal { dim }, matrix.data().to_vec(), tol)
    }

    pub fn classical(probs: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let dim = probs.len();
        State::new(Theory::Classical { dim }, probs, tol)
    }

    pub fn gbit(x: f64, y: f64, tol: &Tolerances) -> Result<Self> {
        State::new(Theory::Gbit, vec![1.0, x, y], tol)
    }

    pub(crate) fn from_parts_unchecked(theory: Theory, coords: Vec<f64>) -> Self {
        State { theory, coords }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The state norm (u|rho): trace, total probability, or the t coordinate.
    pub fn norm(&self) -> f64 {
        match self.theory {
            Theory::QuantumReal { dim } => (0..dim).map(|i| self.coords[i * dim + i]).sum(),
            Theory::Classical { .. } => self.coords.iter().sum(),
            Theory::Gbit => self.coords[0],
        }
    }

    pub fn is_normalized(&self, tol: &Tolerances) -> bool {
        (self.norm() - 1.0).abs() <= tol.normalization
    }

    /// Dense matrix view of a quantum state.
    pub fn as_matrix(&self) -> Result<Matrix> {
        match self.theory {
            Theory::QuantumReal { dim } => Matrix::from_flat(dim, dim, self.coords.clone()),
            _ => Err(Error::UnsupportedTheory {
                operation: "matrix view".into(),
                theory: self.theory.name().into(),
            }),
        }
    }

    pub fn max_abs_diff(&self, other: &State) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl Effect {
    /// Validates shape, symmetry (quantum), and that pairings with all
    /// extreme states land in the clamp band around [0, 1].
    pub fn new(theory: Theory, coords: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if coords.len() != theory.coord_len() {
            return Err(Error::DimensionMismatch(format!(
                "effect for {} needs {} coordinates, got {}",
                theory.name(),
                theory.coord_len(),
                coords.len()
            )));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidEffect("non-finite coordinate".into()));
        }
        if let Theory::QuantumReal { dim } = theory {
            let m = Matrix::from_flat(dim, dim, coords.clone())?;
            if m.asymmetry() > tol.symmetry {
                return Err(Error::NotSymmetric);
            }
        }
        let violation = effect_validity_violation(theory, &coords);
        if violation > tol.pair_clamp {
            return Err(Error::InvalidEffect(format!(
                "pairing range violated by {violation:e}"
            )));
        }
        Ok(Effect { theory, coords })
    }

    pub(crate) fn from_parts_unchecked(theory: Theory, coords: Vec<f64>) -> Self {
        Effect { theory, coords }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn as_matrix(&self) -> Result<Matrix> {
        match self.theory {
            Theory::QuantumReal { dim } => Matrix::from_flat(dim, dim, self.coords.clone()),
            _ => Err(Error::UnsupportedTheory {
                operation: "matrix view".into(),
                theory: self.theory.name().into(),
            }),
        }
    }
}

/// How far the coordinates sit outside the state cone (0 when inside).
pub(crate) fn cone_violation(theory: Theory, coords: &[f64]) -> f64 {
    match theory {
        Theory::QuantumReal { dim } => {
            let m = Matrix::from_flat(dim, dim, coords.to_vec()).expect("shape checked");
            (-linalg::min_eigenvalue(&m)).max(0.0)
        }
        Theory::Classical { .. } => coords.iter().fold(0.0_f64, |w, &x| w.max(-x)),
        Theory::Gbit => {
            let t = coords[0];
            let mut w = (-t).max(0.0);
            w = w.max(coords[1].abs() - t);
            w = w.max(coords[2].abs() - t);
            w.max(0.0)
        }
    }
}

fn cone_band(theory: Theory, tol: &Tolerances) -> f64 {
    match theory {
        Theory::QuantumReal { .. } => tol.cone_quantum,
        Theory::Classical { .. } => tol.cone_classical,
        Theory::Gbit => tol.cone_gbit,
    }
}

/// How far the effect's pairings with extreme states leave [0, 1].
fn effect_validity_violation(theory: Theory, coords: &[f64]) -> f64 {
    match theory {
        Theory::QuantumReal { dim } => {
            let m = Matrix::from_flat(dim, dim, coords.to_vec()).expect("shape checked");
            let (lo, hi) = linalg::eigenvalue_bounds(&m);
            (-lo).max(hi - 1.0).max(0.0)
        }
        Theory::Classical { .. } => coords
            .iter()
            .fold(0.0_f64, |w, &x| w.max(-x).max(x - 1.0)),
        Theory::Gbit => GBIT_CORNERS.iter().fold(0.0_f64, |w, &(x, y)| {
            let v = coords[0] + coords[1] * x + coords[2] * y;
            w.max(-v).max(v - 1.0)
        }),
    }
}

/// The bilinear pairing (a|rho) without range checks.
pub(crate) fn pair_raw(a: &Effect, rho: &State) -> f64 {
    linalg::dot(&a.coords, &rho.coords)
}

/// The probability (a|rho).
///
/// Values inside the clamp band around 0 or 1 are snapped to the endpoint;
/// values outside the band are an error.
pub fn pair(a: &Effect, rho: &State, tol: &Tolerances) -> Result<f64> {
    if a.theory != rho.theory {
        return Err(Error::DimensionMismatch(format!(
            "effect on {} paired with state on {}",
            a.theory.name(),
            rho.theory.name()
        )));
    }
    clamp_probability(pair_raw(a, rho), tol.pair_clamp)
}

pub(crate) fn clamp_probability(x: f64, band: f64) -> Result<f64> {
    if x < -band || x > 1.0 + band {
        return Err(Error::OutOfRange { value: x });
    }
    Ok(x.clamp(0.0, 1.0))
}

/// The unique deterministic effect u of the model.
pub fn deterministic_effect(theory: Theory) -> Effect {
    let coords = match theory {
        Theory::QuantumReal { dim } => Matrix::identity(dim).into_data(),
        Theory::Classical { dim } => vec![1.0; dim],
        Theory::Gbit => vec![1.0, 0.0, 0.0],
    };
    Effect::from_parts_unchecked(theory, coords)
}

/// Apply a reversible channel to a state. Method form: `u.apply(rho)`.
pub fn apply_channel(u: &ReversibleChannel, rho: &State) -> Result<State> {
    u.apply(rho)
}

/// The unique state fixed by every reversible channel.
pub fn invariant_state(theory: Theory) -> State {
    let coords = match theory {
        Theory::QuantumReal { dim } => Matrix::identity(dim).scale(1.0 / dim as f64).into_data(),
        Theory::Classical { dim } => vec![1.0 / dim as f64; dim],
        Theory::Gbit => vec![1.0, 0.0, 0.0],
    };
    State::from_parts_unchecked(theory, coords)
}

/// An element of the dihedral group of the square, acting on (x, y).
/// The optional reflection (x, y) -> (x, -y) is applied first, then
/// `rotation` quarter turns (x, y) -> (-y, x).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dihedral {
    pub rotation: u8,
    pub reflect: bool,
}

impl Dihedral {
    pub fn all() -> Vec<Dihedral> {
        let mut out = Vec::with_capacity(8);
        for &reflect in &[false, true] {
            for rotation in 0..4 {
                out.push(Dihedral { rotation, reflect });
            }
        }
        out
    }

    pub fn apply_xy(&self, x: f64, y: f64) -> (f64, f64) {
        let (mut x, mut y) = if self.reflect { (x, -y) } else { (x, y) };
        for _ in 0..self.rotation {
            let t = x;
            x = -y;
            y = t;
        }
        (x, y)
    }

    /// self after other: (self . other)(v) = self(other(v)).
    pub fn compose(&self, other: &Dihedral) -> Dihedral {
        let e1 = {
            let (x, y) = other.apply_xy(1.0, 0.0);
            self.apply_xy(x, y)
        };
        let e2 = {
            let (x, y) = other.apply_xy(0.0, 1.0);
            self.apply_xy(x, y)
        };
        for cand in Dihedral::all() {
            if cand.apply_xy(1.0, 0.0) == e1 && cand.apply_xy(0.0, 1.0) == e2 {
                return cand;
            }
        }
        unreachable!("dihedral composition closed")
    }

    pub fn inverse(&self) -> Dihedral {
        let id = Dihedral { rotation: 0, reflect: false };
        for cand in Dihedral::all() {
            if self.compose(&cand) == id {
                return cand;
            }
        }
        unreachable!("dihedral elements are invertible")
    }
}

/// Concrete representation of a reversible channel.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelRep {
    /// rho -> O rho O^T for an orthogonal matrix O.
    Orthogonal(Matrix),
    /// out[perm[i]] = in[i]; the channel sends vertex i to vertex perm[i].
    Permutation(Vec<usize>),
    /// An element of the dihedral group acting on (x, y).
    Dihedral(Dihedral),
}

/// An invertible, structure-preserving channel of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct ReversibleChannel {
    theory: Theory,
    rep: ChannelRep,
}

impl ReversibleChannel {
    pub fn orthogonal(theory: Theory, o: Matrix, tol: &Tolerances) -> Result<Self> {
        let dim = match theory {
            Theory::QuantumReal { dim } => dim,
            _ => {
                return Err(Error::UnsupportedTheory {
                    operation: "orthogonal channel".into(),
                    theory: theory.name().into(),
                })
            }
        };
        if o.rows() != dim || o.cols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "orthogonal matrix is {}x{}, expected {dim}x{dim}",
                o.rows(),
                o.cols()
            )));
        }
        let gram = o.transpose().matmul(&o);
        let err = gram.max_abs_diff(&Matrix::identity(dim));
        if err > tol.channel_roundtrip {
            return Err(Error::InvalidState(format!(
                "matrix is not orthogonal: |O^T O - I| = {err:e}"
            )));
        }
        Ok(ReversibleChannel { theory, rep: ChannelRep::Orthogonal(o) })
    }

    pub fn permutation(theory: Theory, perm: Vec<usize>) -> Result<Self> {
        let dim = match theory {
            Theory::Classical { dim } => dim,
            _ => {
                return Err(Error::UnsupportedTheory {
                    operation: "permutation channel".into(),
                    theory: theory.name().into(),
                })
            }
        };
        if perm.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "permutation of length {}, expected {dim}",
                perm.len()
            )));
        }
        let mut seen = vec![false; dim];
        for &p in &perm {
            if p >= dim || seen[p] {
                return Err(Error::InvalidState("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(ReversibleChannel { theory, rep: ChannelRep::Permutation(perm) })
    }

    pub fn dihedral(element: Dihedral) -> Self {
        ReversibleChannel { theory: Theory::Gbit, rep: ChannelRep::Dihedral(element) }
    }

    pub fn identity(theory: Theory) -> Self {
        match theory {
            Theory::QuantumReal { dim } => {
                ReversibleChannel::orthogonal_unchecked(theory, Matrix::identity(dim))
            }
            Theory::Classical { dim } => {
                ReversibleChannel::permutation_unchecked(theory, (0..dim).collect())
            }
            Theory::Gbit => {
                ReversibleChannel::dihedral(Dihedral { rotation: 0, reflect: false })
            }
        }
    }

    pub(crate) fn orthogonal_unchecked(theory: Theory, o: Matrix) -> Self {
        ReversibleChannel { theory, rep: ChannelRep::Orthogonal(o) }
    }

    pub(crate) fn permutation_unchecked(theory: Theory, perm: Vec<usize>) -> Self {
        ReversibleChannel { theory, rep: ChannelRep::Permutation(perm) }
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn rep(&self) -> &ChannelRep {
        &self.rep
    }

    pub fn apply(&self, rho: &State) -> Result<State> {
        if rho.theory != self.theory {
            return Err(Error::DimensionMismatch(format!(
                "channel on {} applied to state on {}",
                self.theory.name(),
                rho.theory.name()
            )));
        }
        let coords = match &self.rep {
            ChannelRep::Orthogonal(o) => {
                let m = rho.as_matrix()?;
                o.matmul(&m).matmul(&o.transpose()).into_data()
            }
            ChannelRep::Permutation(perm) => {
                let mut out = vec![0.0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    out[p] = rho.coords[i];
                }
                out
            }
            ChannelRep::Dihedral(e) => {
                let (x, y) = e.apply_xy(rho.coords[1], rho.coords[2]);
                vec![rho.coords[0], x, y]
            }
        };
        Ok(State::from_parts_unchecked(self.theory, coords))
    }

    /// Dual action on effects: a -> a . U, so that (a.U | rho) = (a | U rho).
    pub fn apply_to_effect(&self, a: &Effect) -> Result<Effect> {
        if a.theory != self.theory {
            return Err(Error::DimensionMismatch("effect/channel theory mismatch".into()));
        }
        let coords = match &self.rep {
            ChannelRep::Orthogonal(o) => {
                let m = a.as_matrix()?;
                o.transpose().matmul(&m).matmul(o).into_data()
            }
            ChannelRep::Permutation(perm) => {
                let mut out = vec![0.0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    out[i] = a.coords[p];
                }
                out
            }
            ChannelRep::Dihedral(e) => {
                let (x, y) = e.inverse().apply_xy(a.coords[1], a.coords[2]);
                vec![a.coords[0], x, y]
            }
        };
        Ok(Effect::from_parts_unchecked(self.theory, coords))
    }

    pub fn inverse(&self) -> ReversibleChannel {
        let rep = match &self.rep {
            ChannelRep::Orthogonal(o) => ChannelRep::Orthogonal(o.transpose()),
            ChannelRep::Permutation(perm) => {
                let mut inv = vec![0; perm.len()];
                for (i, &p) in perm.iter().enumerate() {
                    inv[p] = i;
                }
                ChannelRep::Permutation(inv)
            }
            ChannelRep::Dihedral(e) => ChannelRep::Dihedral(e.inverse()),
        };
        ReversibleChannel { theory: self.theory, rep }
    }

    /// self after inner.
    pub fn compose(&self, inner: &ReversibleChannel) -> Result<ReversibleChannel> {
        if self.theory != inner.theory {
            return Err(Error::DimensionMismatch("composing channels across theories".into()));
        }
        let rep = match (&self.rep, &inner.rep) {
            (ChannelRep::Orthogonal(a), ChannelRep::Orthogonal(b)) => {
                ChannelRep::Orthogonal(a.matmul(b))
            }
            (ChannelRep::Permutation(a), ChannelRep::Permutation(b)) => {
                let composed: Vec<usize> = b.iter().map(|&i| a[i]).collect();
                ChannelRep::Permutation(composed)
            }
            (ChannelRep::Dihedral(a), ChannelRep::Dihedral(b)) => {
                ChannelRep::Dihedral(a.compose(b))
            }
            _ => return Err(Error::DimensionMismatch("mixed channel representations".into())),
        };
        Ok(ReversibleChannel { theory: self.theory, rep })
    }
}

/// An ordered list of effects summing to the deterministic effect.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservationTest {
    effects: Vec<Effect>,
}

impl ObservationTest {
    pub fn new(effects: Vec<Effect>, tol: &Tolerances) -> Result<Self> {
        if !is_observation_test(&effects, tol)? {
            return Err(Error::InvalidEffect(
                "effects do not sum to the deterministic effect".into(),
            ));
        }
        Ok(ObservationTest { effects })
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

/// True iff the effects sum to u within the test-sum band and every effect
/// pairs into the valid probability band with all extreme states.
pub fn is_observation_test(effects: &[Effect], tol: &Tolerances) -> Result<bool> {
    let theory = common_theory_of_effects(effects)?;
    let u = deterministic_effect(theory);
    let mut sum = vec![0.0; theory.coord_len()];
    for e in effects {
        for (s, c) in sum.iter_mut().zip(&e.coords) {
            *s += c;
        }
    }
    for (s, c) in sum.iter().zip(u.coords()) {
        if (s - c).abs() > tol.test_sum {
            return Ok(false);
        }
    }
    for e in effects {
        if effect_validity_violation(theory, &e.coords) > tol.pair_clamp {
            return Ok(false);
        }
    }
    Ok(true)
}

fn common_theory_of_effects(effects: &[Effect]) -> Result<Theory> {
    let first = effects
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty effect list".into()))?;
    for e in effects {
        if e.theory != first.theory {
            return Err(Error::DimensionMismatch("effects on different theories".into()));
        }
    }
    Ok(first.theory)
}

pub(crate) fn common_theory_of_states(states: &[State]) -> Result<Theory> {
    let first = states
        .first()
        .ok_or_else(|| Error::DimensionMismatch("empty state list".into()))?;
    for s in states {
        if s.theory != first.theory {
            return Err(Error::DimensionMismatch("states on different theories".into()));
        }
    }
    Ok(first.theory)
}

/// Result of maximizing (a|rho) over normalized pure effects.
#[derive(Clone, Debug)]
pub struct PureMaximizer {
    /// The maximum probability p*.
    pub p_star: f64,
    /// A maximizing pure effect.
    pub effect: Effect,
    /// A pure state on which the maximizing effect attains 1. For the gbit
    /// this is the first corner in `GBIT_CORNERS` order that attains 1; it
    /// need not be unique.
    pub state: State,
}

/// max over normalized pure effects a of (a|rho), with a maximizer and its
/// unit-probability pure state.
pub fn maximize_pure_effect(rho: &State, tol: &Tolerances) -> Result<PureMaximizer> {
    if !rho.is_normalized(tol) {
        return Err(Error::NotNormalized { norm: rho.norm() });
    }
    match rho.theory {
        Theory::QuantumReal { .. } => {
            let m = rho.as_matrix()?;
            let (lambda, v) = linalg::top_eigenpair(&m);
            let p_star = clamp_probability(lambda, tol.pair_clamp)?;
            let projector = Matrix::outer(&v).into_data();
            Ok(PureMaximizer {
                p_star,
                effect: Effect::from_parts_unchecked(rho.theory, projector.clone()),
                state: State::from_parts_unchecked(rho.theory, projector),
            })
        }
        Theory::Classical { dim } => {
            let mut best = 0;
            for i in 1..dim {
                if rho.coords[i] > rho.coords[best] {
                    best = i;
                }
            }
            let p_star = clamp_probability(rho.coords[best], tol.pair_clamp)?;
            let mut indicator = vec![0.0; dim];
            indicator[best] = 1.0;
            Ok(PureMaximizer {
                p_star,
                effect: Effect::from_parts_unchecked(rho.theory, indicator.clone()),
                state: State::from_parts_unchecked(rho.theory, indicator),
            })
        }
        Theory::Gbit => {
            let effects = gbit_extreme_effects();
            let mut best = 0;
            let mut best_val = pair_raw(&effects[0], rho);
            for (i, e) in effects.iter().enumerate().skip(1) {
                let v = pair_raw(e, rho);
                if v > best_val {
                    best_val = v;
                    best = i;
                }
            }
            let p_star = clamp_probability(best_val, tol.pair_clamp)?;
            let corner = gbit_corners()
                .into_iter()
                .find(|c| pair_raw(&effects[best], c) >= 1.0 - tol.distinguish)
                .ok_or_else(|| {
                    Error::InvalidEffect("extreme effect attains 1 on no corner".into())
                })?;
            Ok(PureMaximizer { p_star, effect: effects[best].clone(), state: corner })
        }
    }
}

/// Verify purity of a state; returns a per-theory description of the failure.
pub(crate) fn check_pure(alpha: &State, tol: &Tolerances) -> Result<()> {
    match alpha.theory {
        Theory::QuantumReal { .. } => {
            let m = alpha.as_matrix()?;
            let (_, residual) = linalg::rank_one_factor(&m)?;
            if residual > tol.purity {
                return Err(Error::NotPure(format!(
                    "rank-one residual {residual:e} exceeds purity band"
                )));
            }
            if (m.trace() - 1.0).abs() > tol.purity {
                return Err(Error::NotPure(format!("trace {} is not 1", m.trace())));
            }
            Ok(())
        }
        Theory::Classical { dim } => {
            let mut ones = 0;
            for i in 0..dim {
                let x = alpha.coords[i];
                if (x - 1.0).abs() <= tol.purity {
                    ones += 1;
                } else if x.abs() > tol.purity {
                    return Err(Error::NotPure(format!("entry {i} is {x}, neither 0 nor 1")));
                }
            }
            if ones != 1 {
                return Err(Error::NotPure(format!("{ones} unit entries, expected 1")));
            }
            Ok(())
        }
        Theory::Gbit => {
            let (x, y) = (alpha.coords[1], alpha.coords[2]);
            if (x.abs() - 1.0).abs() > tol.purity || (y.abs() - 1.0).abs() > tol.purity {
                return Err(Error::NotPure(format!("({x}, {y}) is not a corner")));
            }
            Ok(())
        }
    }
}

pub(crate) fn classical_vertex_index(alpha: &State, tol: &Tolerances) -> Result<usize> {
    check_pure(alpha, tol)?;
    alpha
        .coords
        .iter()
        .position(|&x| (x - 1.0).abs() <= tol.purity)
        .ok_or_else(|| Error::NotPure("no unit entry".into()))
}

pub(crate) fn gbit_corner_index(alpha: &State, tol: &Tolerances) -> Result<usize> {
    check_pure(alpha, tol)?;
    let (x, y) = (alpha.coords[1], alpha.coords[2]);
    for (i, &(cx, cy)) in GBIT_CORNERS.iter().enumerate() {
        if (x - cx).abs() <= tol.purity && (y - cy).abs() <= tol.purity {
            return Ok(i);
        }
    }
    Err(Error::NotPure(format!("({x}, {y}) matches no corner")))
}

/// All pure effects attaining 1 on the pure state `alpha`.
///
/// One element for models with a unique dagger; for the gbit every corner is
/// met by two edge effects, which is exactly the uniqueness violation the
/// axioms module reports.
pub(crate) fn dagger_candidates(alpha: &State, tol: &Tolerances) -> Result<Vec<Effect>> {
    match alpha.theory {
        Theory::QuantumReal { .. } | Theory::Classical { .. } => Ok(vec![dagger(alpha, tol)?]),
        Theory::Gbit => {
            check_pure(alpha, tol)?;
            let candidates: Vec<Effect> = gbit_extreme_effects()
                .into_iter()
                .filter(|e| pair_raw(e, alpha) >= 1.0 - tol.distinguish)
                .collect();
            Ok(candidates)
        }
    }
}

/// The pure effect a with (a|alpha) = 1, unique under the model's dagger
/// correspondence. The gbit has two such effects per corner and reports
/// `DaggerNotUnique`.
pub fn dagger(alpha: &State, tol: &Tolerances) -> Result<Effect> {
    check_pure(alpha, tol)?;
    match alpha.theory {
        Theory::QuantumReal { .. } => {
            let m = alpha.as_matrix()?;
            let (v, _) = linalg::rank_one_factor(&m)?;
            Ok(Effect::from_parts_unchecked(
                alpha.theory,
                Matrix::outer(&v).into_data(),
            ))
        }
        Theory::Classical { dim } => {
            let idx = classical_vertex_index(alpha, tol)?;
            let mut coords = vec![0.0; dim];
            coords[idx] = 1.0;
            Ok(Effect::from_parts_unchecked(alpha.theory, coords))
        }
        Theory::Gbit => Err(Error::DaggerNotUnique),
    }
}

/// Outcome of searching per-state pure effects that jointly distinguish.
#[derive(Clone, Debug)]
pub(crate) enum DistinguishSearch {
    Found(Vec<Effect>),
    Violation { i: usize, j: usize, value: f64 },
}

/// For every state find a pure effect attaining 1 on it and 0 on the others.
/// Uses the dagger where it is unique and the candidate set for the gbit.
pub(crate) fn distinguishing_effects(
    states: &[State],
    tol: &Tolerances,
) -> Result<DistinguishSearch> {
    common_theory_of_states(states)?;
    let mut chosen = Vec::with_capacity(states.len());
    for (i, alpha) in states.iter().enumerate() {
        let candidates = dagger_candidates(alpha, tol)?;
        let mut found = None;
        let mut worst: Option<(usize, f64)> = None;
        for cand in &candidates {
            let on_self = pair_raw(cand, alpha);
            if on_self < 1.0 - tol.distinguish {
                continue;
            }
            let mut bad: Option<(usize, f64)> = None;
            for (j, other) in states.iter().enumerate() {
                if j == i {
                    continue;
                }
                let v = pair_raw(cand, other);
                if v.abs() > tol.distinguish {
                    bad = Some((j, v));
                    break;
                }
            }
            match bad {
                None => {
                    found = Some(cand.clone());
                    break;
                }
                Some((j, v)) => {
                    if worst.is_none() {
                        worst = Some((j, v));
                    }
                }
            }
        }
        match found {
            Some(e) => chosen.push(e),
            None => {
                let (j, value) = worst.unwrap_or((i, 1.0));
                return Ok(DistinguishSearch::Violation { i, j, value });
            }
        }
    }
    Ok(DistinguishSearch::Found(chosen))
}

/// Extend a pairwise perfectly distinguishable pure set to a maximal one.
///
/// Quantum completion is Gram-Schmidt over canonical basis vectors in index
/// order with the first-nonzero-positive sign convention; classical completion
/// appends the remaining vertices in index order; the gbit completes within
/// its two hard-coded diagonal corner pairs.
pub fn complete_to_maximal(
    partial: &[State],
    theory: Theory,
    tol: &Tolerances,
) -> Result<Vec<State>> {
    for s in partial {
        if s.theory != theory {
            return Err(Error::DimensionMismatch("state does not belong to the theory".into()));
        }
    }
    let d = theory.dim_operational();
    if partial.len() > d {
        return Err(Error::NotExtendable(format!(
            "{} states exceed the operational dimension {d}",
            partial.len()
        )));
    }
    if !partial.is_empty() {
        match distinguishing_effects(partial, tol)? {
            DistinguishSearch::Found(_) => {}
            DistinguishSearch::Violation { i, j, value } => {
                return Err(Error::NotDistinguishable(format!(
                    "states {i} and {j} overlap with value {value}"
                )));
            }
        }
    }
    match theory {
        Theory::QuantumReal { dim } => {
            let mut vectors = Vec::with_capacity(partial.len());
            for s in partial {
                let m = s.as_matrix()?;
                let (v, _) = linalg::rank_one_factor(&m)?;
                vectors.push(v);
            }
            let basis = linalg::complete_orthonormal_basis(&vectors, dim)?;
            let mut out: Vec<State> = partial.to_vec();
            for v in basis.iter().skip(partial.len()) {
                out.push(State::from_parts_unchecked(
                    theory,
                    Matrix::outer(v).into_data(),
                ));
            }
            Ok(out)
        }
        Theory::Classical { dim } => {
            let mut used = vec![false; dim];
            for s in partial {
                used[classical_vertex_index(s, tol)?] = true;
            }
            let mut out: Vec<State> = partial.to_vec();
            for (k, flag) in used.iter().enumerate() {
                if !flag {
                    out.push(classical_vertex(dim, k));
                }
            }
            Ok(out)
        }
        Theory::Gbit => {
            let indices: Vec<usize> = partial
                .iter()
                .map(|s| gbit_corner_index(s, tol))
                .collect::<Result<_>>()?;
            match indices.as_slice() {
                [] => Ok(vec![
                    gbit_corners()[GBIT_MAXIMAL_PAIRS[0].0].clone(),
                    gbit_corners()[GBIT_MAXIMAL_PAIRS[0].1].clone(),
                ]),
                [a] => {
                    let opposite = GBIT_MAXIMAL_PAIRS
                        .iter()
                        .find_map(|&(x, y)| {
                            if x == *a {
                                Some(y)
                            } else if y == *a {
                                Some(x)
                            } else {
                                None
                            }
                        })
                        .expect("every corner sits on a diagonal");
                    Ok(vec![partial[0].clone(), gbit_corners()[opposite].clone()])
                }
                [a, b] => {
                    let diagonal = GBIT_MAXIMAL_PAIRS
                        .iter()
                        .any(|&(x, y)| (x, y) == (*a, *b) || (y, x) == (*a, *b));
                    if diagonal {
                        Ok(partial.to_vec())
                    } else {
                        Err(Error::NotExtendable(
                            "adjacent gbit corners do not form a registered maximal set".into(),
                        ))
                    }
                }
                _ => Err(Error::NotExtendable("more than two gbit corners".into())),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn qstate(rows: &[Vec<f64>]) -> State {
        State::quantum(&Matrix::from_rows(rows).unwrap(), &tol()).unwrap()
    }

    #[test]
    fn model_dimensions() {
        let q = Theory::QuantumReal { dim: 4 };
        assert_eq!(q.dim_linear(), 10); // symmetric 4x4 matrices
        assert_eq!(q.dim_operational(), 4);
        assert_eq!(q.coord_len(), 16);
        assert!(q.has_unique_dagger() && q.has_purification() && !q.pure_effects_finite());

        let c = Theory::Classical { dim: 5 };
        assert_eq!(c.dim_linear(), 5);
        assert_eq!(c.dim_operational(), 5);
        assert!(c.has_unique_dagger() && !c.has_purification() && c.pure_effects_finite());

        assert_eq!(Theory::Gbit.dim_linear(), 3);
        assert_eq!(Theory::Gbit.dim_operational(), 2);
        assert!(!Theory::Gbit.has_unique_dagger());
    }

    #[test]
    fn pair_trace_inner_product() {
        let a = Effect::new(
            Theory::QuantumReal { dim: 2 },
            vec![1.0, 0.0, 0.0, 0.0],
            &tol(),
        )
        .unwrap();
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        assert_eq!(pair(&a, &rho, &tol()).unwrap(), 0.7);
    }

    #[test]
    fn unit_effect_pairs_to_one_on_normalized_states() {
        for theory in [
            Theory::QuantumReal { dim: 3 },
            Theory::Classical { dim: 4 },
            Theory::Gbit,
        ] {
            let u = deterministic_effect(theory);
            let chi = invariant_state(theory);
            assert!((pair(&u, &chi, &tol()).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gbit_edge_effect_attains_one_on_corner() {
        let e = &gbit_extreme_effects()[0];
        let corner = State::gbit(1.0, 1.0, &tol()).unwrap();
        assert_eq!(pair(e, &corner, &tol()).unwrap(), 1.0);
    }

    #[test]
    fn pair_clamps_only_inside_the_band() {
        assert_eq!(clamp_probability(-5e-11, 1e-10).unwrap(), 0.0);
        assert_eq!(clamp_probability(1.0 + 5e-11, 1e-10).unwrap(), 1.0);
        assert!(matches!(
            clamp_probability(1.0 + 2e-10, 1e-10),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            clamp_probability(-2e-10, 1e-10),
            Err(Error::OutOfRange { .. })
        ));
        assert_eq!(clamp_probability(0.25, 1e-10).unwrap(), 0.25);
    }

    #[test]
    fn pair_is_bilinear_in_the_state() {
        let a = Effect::new(
            Theory::QuantumReal { dim: 2 },
            vec![0.5, 0.1, 0.1, 0.25],
            &tol(),
        )
        .unwrap();
        let r1 = qstate(&[vec![0.7, 0.1], vec![0.1, 0.3]]);
        let r2 = qstate(&[vec![0.2, 0.0], vec![0.0, 0.8]]);
        let lambda = 0.3;
        let mixed: Vec<f64> = r1
            .coords()
            .iter()
            .zip(r2.coords())
            .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
            .collect();
        let mix = State::new(Theory::QuantumReal { dim: 2 }, mixed, &tol()).unwrap();
        let lhs = pair_raw(&a, &mix);
        let rhs = lambda * pair_raw(&a, &r1) + (1.0 - lambda) * pair_raw(&a, &r2);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn deterministic_effects_match_models() {
        assert_eq!(
            deterministic_effect(Theory::Classical { dim: 3 }).coords(),
            &[1.0, 1.0, 1.0]
        );
        assert_eq!(
            deterministic_effect(Theory::QuantumReal { dim: 2 }).coords(),
            &[1.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(deterministic_effect(Theory::Gbit).coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn invariant_states_match_models() {
        assert_eq!(
            invariant_state(Theory::Classical { dim: 4 }).coords(),
            &[0.25, 0.25, 0.25, 0.25]
        );
        let chi = invariant_state(Theory::QuantumReal { dim: 3 });
        let third = 1.0 / 3.0;
        assert_eq!(
            chi.coords(),
            &[third, 0.0, 0.0, 0.0, third, 0.0, 0.0, 0.0, third]
        );
        assert_eq!(invariant_state(Theory::Gbit).coords(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn invariant_state_is_fixed_by_generators() {
        for theory in [
            Theory::QuantumReal { dim: 4 },
            Theory::Classical { dim: 5 },
            Theory::Gbit,
        ] {
            let chi = invariant_state(theory);
            for g in theory.group_generators() {
                let moved = g.apply(&chi).unwrap();
                assert!(moved.max_abs_diff(&chi) < tol().invariant_fixed);
            }
        }
    }

    #[test]
    fn apply_channel_examples() {
        // Basis swap on a diagonal quantum state.
        let swap = ReversibleChannel::orthogonal(
            Theory::QuantumReal { dim: 2 },
            Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
            &tol(),
        )
        .unwrap();
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        let out = swap.apply(&rho).unwrap();
        assert_eq!(out.coords(), &[0.3, 0.0, 0.0, 0.7]);

        // Identity permutation.
        let id = ReversibleChannel::permutation(Theory::Classical { dim: 3 }, vec![0, 1, 2])
            .unwrap();
        let p = State::classical(vec![0.5, 0.3, 0.2], &tol()).unwrap();
        assert_eq!(id.apply(&p).unwrap().coords(), p.coords());

        // Quarter turn on a gbit corner.
        let rot = ReversibleChannel::dihedral(Dihedral { rotation: 1, reflect: false });
        let corner = State::gbit(1.0, 1.0, &tol()).unwrap();
        assert_eq!(rot.apply(&corner).unwrap().coords(), &[1.0, -1.0, 1.0]);
    }

    #[test]
    fn channel_roundtrip_and_unit_preservation() {
        let theory = Theory::QuantumReal { dim: 3 };
        let rho = invariant_state(theory);
        for g in theory.group_generators() {
            let forward = g.apply(&rho).unwrap();
            let back = g.inverse().apply(&forward).unwrap();
            assert!(back.max_abs_diff(&rho) < tol().channel_roundtrip);
            assert!((forward.norm() - rho.norm()).abs() < tol().channel_roundtrip);
        }
    }

    #[test]
    fn dual_channel_action_matches_primal() {
        let theory = Theory::QuantumReal { dim: 3 };
        let rho = qstate(&[
            vec![0.5, 0.1, 0.0],
            vec![0.1, 0.3, 0.05],
            vec![0.0, 0.05, 0.2],
        ]);
        let a = Effect::new(
            theory,
            Matrix::from_rows(&[
                vec![0.4, 0.0, 0.1],
                vec![0.0, 0.6, 0.0],
                vec![0.1, 0.0, 0.5],
            ])
            .unwrap()
            .into_data(),
            &tol(),
        )
        .unwrap();
        for g in theory.group_generators() {
            let lhs = pair_raw(&g.apply_to_effect(&a).unwrap(), &rho);
            let rhs = pair_raw(&a, &g.apply(&rho).unwrap());
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn maximize_pure_effect_examples() {
        let rho = qstate(&[vec![0.7, 0.0], vec![0.0, 0.3]]);
        let m = maximize_pure_effect(&rho, &tol()).unwrap();
        assert!((m.p_star - 0.7).abs() < 1e-12);
        assert!(m.state.max_abs_diff(&qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]])) < 1e-10);

        let chi = invariant_state(Theory::QuantumReal { dim: 3 });
        let m = maximize_pure_effect(&chi, &tol()).unwrap();
        assert!((m.p_star - 1.0 / 3.0).abs() < 1e-12);

        // Oracle: closed-form eigenvalues of a symmetric 2x2 matrix.
        let rho = qstate(&[vec![0.5, 0.4], vec![0.4, 0.5]]);
        let expected = 0.5 + 0.4;
        let m = maximize_pure_effect(&rho, &tol()).unwrap();
        assert!((m.p_star - expected).abs() < 1e-12);
    }

    #[test]
    fn maximize_requires_normalization() {
        let sub = State::new(
            Theory::QuantumReal { dim: 2 },
            vec![0.4, 0.0, 0.0, 0.3],
            &tol(),
        )
        .unwrap();
        assert!(matches!(
            maximize_pure_effect(&sub, &tol()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn dagger_examples() {
        let alpha = qstate(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        let a = dagger(&alpha, &tol()).unwrap();
        assert!((pair(&a, &alpha, &tol()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(a.coords(), &[1.0, 0.0, 0.0, 0.0]);

        let vertex = State::classical(vec![0.0, 1.0, 0.0], &tol()).unwrap();
        assert_eq!(dagger(&vertex, &tol()).unwrap().coords(), &[0.0, 1.0, 0.0]);

        let corner = State::gbit(1.0, 1.0, &tol()).unwrap();
        assert!(matches!(dagger(&corner, &tol()), Err(Error::DaggerNotUnique)));
        // Both edge effects through the corner attain 1.
        let cands = dagger_candidates(&corner, &tol()).unwrap();
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].coords(), &[0.5, 0.5, 0.0]);
        assert_eq!(cands[1].coords(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn dagger_orthogonality_for_quantum() {
        let v = linalg::normalize(&[1.0, 2.0, -1.0]);
        let alpha = State::from_parts_unchecked(
            Theory::QuantumReal { dim: 3 },
            Matrix::outer(&v).into_data(),
        );
        let a = dagger(&alpha, &tol()).unwrap();
        assert!((pair_raw(&a, &alpha) - 1.0).abs() < 1e-10);
        let basis = linalg::complete_orthonormal_basis(&[v], 3).unwrap();
        for w in basis.iter().skip(1) {
            let beta = State::from_parts_unchecked(
                Theory::QuantumReal { dim: 3 },
                Matrix::outer(w).into_data(),
            );
            assert!(pair_raw(&a, &beta).abs() < 1e-10);
        }
    }

    #[test]
    fn dagger_rejects_mixed_states() {
        let mixed = qstate(&[vec![0.6, 0.0], vec![0.0, 0.4]]);
        assert!(matches!(dagger(&mixed, &tol()), Err(Error::NotPure(_))));
    }

    #[test]
    fn observation_test_examples() {
        let t = Theory::QuantumReal { dim: 2 };
        let e0 = Effect::new(t, vec![1.0, 0.0, 0.0, 0.0], &tol()).unwrap();
        let e1 = Effect::new(t, vec![0.0, 0.0, 0.0, 1.0], &tol()).unwrap();
        assert!(is_observation_test(&[e0, e1], &tol()).unwrap());

        let c = Theory::Classical { dim: 3 };
        let f0 = Effect::new(c, vec![1.0, 0.0, 0.0], &tol()).unwrap();
        let f1 = Effect::new(c, vec![0.0, 1.0, 0.0], &tol()).unwrap();
        assert!(!is_observation_test(&[f0, f1], &tol()).unwrap());

        let half = Effect::new(t, vec![0.5, 0.0, 0.0, 0.5], &tol()).unwrap();
        assert!(is_observation_test(&[half.clone(), half], &tol()).unwrap());
    }

    #[test]
    fn complete_to_maximal_examples() {
        let t3 = Theory::QuantumReal { dim: 3 };
        let e1 = State::from_parts_unchecked(
            t3,
            Matrix::outer(&[1.0, 0.0, 0.0]).into_data(),
        );
        let full = complete_to_maximal(&[e1], t3, &tol()).unwrap();
        assert_eq!(full.len(), 3);
        assert_eq!(full[1].coords()[4], 1.0); // e2 e2^T
        assert_eq!(full[2].coords()[8], 1.0); // e3 e3^T

        let c2 = Theory::Classical { dim: 2 };
        let both = complete_to_maximal(&[], c2, &tol()).unwrap();
        assert_eq!(both.len(), 2);
        assert_eq!(both[0].coords(), &[1.0, 0.0]);
        assert_eq!(both[1].coords(), &[0.0, 1.0]);

        let t2 = Theory::QuantumReal { dim: 2 };
        let v = linalg::normalize(&[1.0, 1.0]);
        let plus = State::from_parts_unchecked(t2, Matrix::outer(&v).into_data());
        let full = complete_to_maximal(&[plus], t2, &tol()).unwrap();
        let w = linalg::normalize(&[1.0, -1.0]);
        let minus = State::from_parts_unchecked(t2, Matrix::outer(&w).into_data());
        assert!(full[1].max_abs_diff(&minus) < 1e-12);
    }

    #[test]
    fn complete_to_maximal_gbit_rules() {
        let corners = gbit_corners();
        let completed = complete_to_maximal(&[corners[0].clone()], Theory::Gbit, &tol()).unwrap();
        assert_eq!(completed[1].coords(), corners[3].coords());

        let diagonal = complete_to_maximal(
            &[corners[1].clone(), corners[2].clone()],
            Theory::Gbit,
            &tol(),
        )
        .unwrap();
        assert_eq!(diagonal.len(), 2);

        let adjacent = complete_to_maximal(
            &[corners[0].clone(), corners[1].clone()],
            Theory::Gbit,
            &tol(),
        );
        assert!(matches!(adjacent, Err(Error::NotExtendable(_))));
    }

    #[test]
    fn complete_to_maximal_rejects_overlapping_states() {
        let t2 = Theory::QuantumReal { dim: 2 };
        let e1 = State::from_parts_unchecked(t2, Matrix::outer(&[1.0, 0.0]).into_data());
        let res = complete_to_maximal(&[e1.clone(), e1], t2, &tol());
        assert!(matches!(res, Err(Error::NotDistinguishable(_))));
    }

    #[test]
    fn dihedral_group_structure() {
        let all = Dihedral::all();
        assert_eq!(all.len(), 8);
        for a in &all {
            let inv = a.inverse();
            let id = a.compose(&inv);
            assert_eq!(id, Dihedral { rotation: 0, reflect: false });
        }
        // Associativity spot check.
        let r = Dihedral { rotation: 1, reflect: false };
        let s = Dihedral { rotation: 0, reflect: true };
        let lhs = r.compose(&s).compose(&r);
        let rhs = r.compose(&s.compose(&r));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn effect_validation_rejects_out_of_band() {
        let t = Theory::QuantumReal { dim: 2 };
        let too_big = Effect::new(t, vec![1.5, 0.0, 0.0, 0.0], &tol());
        assert!(matches!(too_big, Err(Error::InvalidEffect(_))));
        let negative = Effect::new(Theory::Classical { dim: 2 }, vec![-0.2, 0.5], &tol());
        assert!(matches!(negative, Err(Error::InvalidEffect(_))));
    }

    #[test]
    fn pair_rejects_mismatched_theories() {
        let a = deterministic_effect(Theory::Classical { dim: 3 });
        let rho = invariant_state(Theory::Classical { dim: 4 });
        assert!(matches!(pair(&a, &rho, &tol()), Err(Error::DimensionMismatch(_))));
        let rho = invariant_state(Theory::Gbit);
        assert!(matches!(pair(&a, &rho, &tol()), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn apply_channel_rejects_mismatched_theories() {
        let swap = ReversibleChannel::permutation(Theory::Classical { dim: 2 }, vec![1, 0])
            .unwrap();
        let rho = invariant_state(Theory::Classical { dim: 3 });
        assert!(matches!(
            apply_channel(&swap, &rho),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn state_validation_rejects_cone_exits() {
        let bad = State::new(
            Theory::QuantumReal { dim: 2 },
            vec![1.2, 0.0, 0.0, -0.2],
            &tol(),
        );
        assert!(matches!(bad, Err(Error::InvalidState(_))));
        let bad_gbit = State::gbit(1.5, 0.0, &tol());
        assert!(matches!(bad_gbit, Err(Error::InvalidState(_))));
        let asym = State::new(
            Theory::QuantumReal { dim: 2 },
            vec![0.5, 0.2, 0.1, 0.5],
            &tol(),
        );
        assert!(matches!(asym, Err(Error::NotSymmetric)));
    }
}

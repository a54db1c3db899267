//! Majorization predicate, doubly stochastic verification, Birkhoff-von
//! Neumann decomposition, the Hardy-Littlewood-Polya T-transform chain, and
//! the transition matrix between maximal pure sets.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::spectral::{verify_distinguishable, Diagonalization, DistinguishOutcome};
use crate::theory::{self, dagger, State};
use crate::tol::Tolerances;

/// A sorted eigenvalue vector: non-increasing entries in [0, 1] summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Validates ordering, range, and normalization. Entries inside the float
    /// noise band below 0 are snapped to exact zeros.
    pub fn new(values: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::LengthMismatch(0, 1));
        }
        for w in values.windows(2) {
            if w[1] > w[0] + tol.spectrum_sorted {
                return Err(Error::NotSorted);
            }
        }
        let mut cleaned = Vec::with_capacity(values.len());
        for &x in &values {
            if !x.is_finite() || x < -tol.spectrum_sorted || x > 1.0 + tol.spectrum_sorted {
                return Err(Error::Parse(format!("spectrum entry {x} outside [0, 1]")));
            }
            cleaned.push(if x < 0.0 { 0.0 } else { x });
        }
        let sum: f64 = cleaned.iter().sum();
        if (sum - 1.0).abs() > tol.spectrum_sum {
            return Err(Error::Parse(format!("spectrum sums to {sum}, expected 1")));
        }
        Ok(Spectrum { values: cleaned })
    }

    /// Sorts descending first, then validates.
    pub fn from_unsorted(mut values: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Spectrum::new(values, tol)
    }

    /// The spectrum of a diagonalization, zero-padded to `len` entries.
    pub fn from_diagonalization(
        diag: &Diagonalization,
        len: usize,
        tol: &Tolerances,
    ) -> Result<Self> {
        if len < diag.eigenvalues.len() {
            return Err(Error::LengthMismatch(diag.eigenvalues.len(), len));
        }
        Spectrum::new(diag.padded_eigenvalues(len), tol)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Padded with exact zeros; `len` must not truncate.
    pub fn zero_padded(&self, len: usize) -> Result<Spectrum> {
        if len < self.values.len() {
            return Err(Error::LengthMismatch(self.values.len(), len));
        }
        let mut values = self.values.clone();
        values.resize(len, 0.0);
        Ok(Spectrum { values })
    }

    /// Equal as multisets within the band (both are sorted, so elementwise).
    pub fn approx_eq(&self, other: &Spectrum, band: f64) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= band)
    }
}

/// True iff `y` majorizes `x`: every partial sum of `x` is at most the
/// matching partial sum of `y` within the slack, and the totals agree.
pub fn majorizes(y: &Spectrum, x: &Spectrum, tol: &Tolerances) -> Result<bool> {
    if y.len() != x.len() {
        return Err(Error::LengthMismatch(y.len(), x.len()));
    }
    for s in [x, y] {
        for w in s.values.windows(2) {
            if w[1] > w[0] + tol.spectrum_sorted {
                return Err(Error::NotSorted);
            }
        }
    }
    let mut sx = 0.0;
    let mut sy = 0.0;
    for k in 0..x.len() {
        sx += x.values[k];
        sy += y.values[k];
        if k + 1 < x.len() {
            if sx > sy + tol.majorization {
                return Ok(false);
            }
        } else if (sx - sy).abs() > tol.majorization {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First 1-based index where the partial sum of `x` exceeds that of `y`,
/// if any. The witness part of a negative majorization verdict.
pub fn first_violating_index(y: &Spectrum, x: &Spectrum, tol: &Tolerances) -> Option<usize> {
    let mut sx = 0.0;
    let mut sy = 0.0;
    for k in 0..x.len().min(y.len()) {
        sx += x.values[k];
        sy += y.values[k];
        if sx > sy + tol.majorization {
            return Some(k + 1);
        }
    }
    None
}

/// All entries at least -tol and every row and column sum within tol of 1.
pub fn is_doubly_stochastic(m: &Matrix, tol: f64) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let d = m.rows();
    for i in 0..d {
        let mut row = 0.0;
        let mut col = 0.0;
        for j in 0..d {
            if m.get(i, j) < -tol || m.get(j, i) < -tol {
                return Ok(false);
            }
            row += m.get(i, j);
            col += m.get(j, i);
        }
        if (row - 1.0).abs() > tol || (col - 1.0).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convex decomposition of a doubly stochastic matrix into permutations.
///
/// `permutations[k][j]` is the row of the unit entry in column j, i.e. the
/// permutation sends index j to `permutations[k][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BirkhoffDecomposition {
    pub weights: Vec<f64>,
    pub permutations: Vec<Vec<usize>>,
}

impl BirkhoffDecomposition {
    /// Sum of weighted permutation matrices.
    pub fn reconstruct(&self) -> Matrix {
        let d = self.permutations.first().map_or(0, |p| p.len());
        let mut m = Matrix::zeros(d, d);
        for (w, perm) in self.weights.iter().zip(&self.permutations) {
            for (j, &i) in perm.iter().enumerate() {
                m.set(i, j, m.get(i, j) + w);
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Kuhn augmenting-path matching on the support graph. Rows are processed in
/// index order and columns tried in index order, so the result is
/// deterministic. Returns column -> row.
fn perfect_matching(support: &[Vec<bool>]) -> Option<Vec<usize>> {
    let d = support.len();
    let mut row_of_col: Vec<Option<usize>> = vec![None; d];

    fn try_assign(
        row: usize,
        support: &[Vec<bool>],
        seen: &mut [bool],
        row_of_col: &mut [Option<usize>],
    ) -> bool {
        let d = support.len();
        for col in 0..d {
            if support[row][col] && !seen[col] {
                seen[col] = true;
                let free = match row_of_col[col] {
                    None => true,
                    Some(prev) => try_assign(prev, support, seen, row_of_col),
                };
                if free {
                    row_of_col[col] = Some(row);
                    return true;
                }
            }
        }
        false
    }

    for row in 0..d {
        let mut seen = vec![false; d];
        if !try_assign(row, support, &mut seen, &mut row_of_col) {
            return None;
        }
    }
    let mut perm = vec![0; d];
    for (col, r) in row_of_col.iter().enumerate() {
        perm[col] = (*r)?;
    }
    Some(perm)
}

/// Greedy Birkhoff-von Neumann extraction.
///
/// Repeatedly finds a perfect matching on the entries above the support
/// threshold, subtracts the minimal matched entry, and stops once the
/// residual is below the residual band. Weights are renormalized to sum
/// exactly 1.
pub fn birkhoff(m: &Matrix, tol: &Tolerances) -> Result<BirkhoffDecomposition> {
    if !is_doubly_stochastic(m, tol.doubly_stochastic)? {
        return Err(Error::NoPerfectMatching);
    }
    let d = m.rows();
    let mut residual = m.clone();
    let mut weights: Vec<f64> = Vec::new();
    let mut permutations: Vec<Vec<usize>> = Vec::new();
    let cap = d * d + 2;
    for _ in 0..cap {
        if residual.max_abs() < tol.birkhoff_residual {
            break;
        }
        let support: Vec<Vec<bool>> = (0..d)
            .map(|i| (0..d).map(|j| residual.get(i, j) > tol.birkhoff_support).collect())
            .collect();
        let perm = perfect_matching(&support).ok_or(Error::NoPerfectMatching)?;
        let lambda = perm
            .iter()
            .enumerate()
            .map(|(j, &i)| residual.get(i, j))
            .fold(f64::INFINITY, f64::min);
        for (j, &i) in perm.iter().enumerate() {
            let v = residual.get(i, j) - lambda;
            residual.set(i, j, if v < 0.0 { 0.0 } else { v });
        }
        weights.push(lambda);
        permutations.push(perm);
    }
    if residual.max_abs() >= tol.birkhoff_residual {
        return Err(Error::NoPerfectMatching);
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    Ok(BirkhoffDecomposition { weights, permutations })
}

/// Doubly stochastic matrix P with p = P q, built from at most d-1
/// Hardy-Littlewood-Polya T-transforms.
///
/// Each step selects the smallest j with p_j < q'_j and the smallest k > j
/// with p_k > q'_k in the working vector q', then mixes the two coordinates
/// just enough to close one of the gaps.
pub fn transfer_matrix(p: &Spectrum, q: &Spectrum, tol: &Tolerances) -> Result<Matrix> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    if !majorizes(q, p, tol)? {
        return Err(Error::NotMajorized);
    }
    let d = p.len();
    let mut work: Vec<f64> = q.values().to_vec();
    let mut transfer = Matrix::identity(d);
    let settle = 1e-13;
    for _ in 0..d {
        let gap = p
            .values()
            .iter()
            .zip(&work)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        if gap <= settle {
            break;
        }
        let j = match (0..d).find(|&j| p.values()[j] < work[j] - settle) {
            Some(j) => j,
            None => break,
        };
        let k = match ((j + 1)..d).find(|&k| p.values()[k] > work[k] + settle) {
            Some(k) => k,
            None => break,
        };
        let delta = (work[j] - p.values()[j]).min(p.values()[k] - work[k]);
        let t = delta / (work[j] - work[k]);
        let mut step = Matrix::identity(d);
        step.set(j, j, 1.0 - t);
        step.set(j, k, t);
        step.set(k, j, t);
        step.set(k, k, 1.0 - t);
        transfer = step.matmul(&transfer);
        let (wj, wk) = (work[j], work[k]);
        work[j] = (1.0 - t) * wj + t * wk;
        work[k] = t * wj + (1.0 - t) * wk;
    }
    let image = transfer.mat_vec(q.values());
    let err = image
        .iter()
        .zip(p.values())
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    if err > tol.majorization {
        return Err(Error::SynthesisVerificationFailed(err));
    }
    Ok(transfer)
}

/// The matrix of pairings (dagger(psi_i) | phi_j) between two maximal pure
/// sets, verified doubly stochastic.
pub fn transition_matrix(psi: &[State], phi: &[State], tol: &Tolerances) -> Result<Matrix> {
    let theory = theory::common_theory_of_states(psi)?;
    let theory_phi = theory::common_theory_of_states(phi)?;
    if theory != theory_phi {
        return Err(Error::DimensionMismatch("maximal sets on different theories".into()));
    }
    if !theory.has_unique_dagger() {
        return Err(Error::DaggerNotUnique);
    }
    let d = theory.dim_operational();
    if psi.len() != d || phi.len() != d {
        return Err(Error::NotMaximal(format!(
            "sets have sizes {} and {}, expected {d}",
            psi.len(),
            phi.len()
        )));
    }
    for set in [psi, phi] {
        match verify_distinguishable(set, tol)? {
            DistinguishOutcome::Certificate(_) => {}
            DistinguishOutcome::Violation { i, j, value } => {
                return Err(Error::NotMaximal(format!(
                    "states {i} and {j} are not distinguishable (value {value})"
                )));
            }
        }
    }
    let mut m = Matrix::zeros(d, d);
    for (i, s) in psi.iter().enumerate() {
        let a = dagger(s, tol)?;
        for (j, t) in phi.iter().enumerate() {
            m.set(i, j, theory::clamp_probability(theory::pair_raw(&a, t), tol.pair_clamp)?);
        }
    }
    if !is_doubly_stochastic(&m, tol.doubly_stochastic)? {
        return Err(Error::NotDoublyStochastic(
            "transition matrix rows/columns do not sum to 1".into(),
        ));
    }
    Ok(m)
}

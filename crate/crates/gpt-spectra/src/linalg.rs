//! Dense real matrices and the small numeric kernels the rest of the crate
//! builds on. Everything here is plain row-major `Vec<f64>` storage; the
//! dimensions involved never exceed a few dozen.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::DimensionMismatch("matrix has no rows".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::DimensionMismatch("matrix has empty rows".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    cols
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "flat data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Outer product v v^T.
    pub fn outer(v: &[f64]) -> Self {
        let n = v.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, v[i] * v[j]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions must agree");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, f: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * f).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Max |M - M^T|; zero for exactly symmetric matrices.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Numerical rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, threshold: f64) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            if row >= a.rows {
                break;
            }
            let mut pivot = row;
            for r in row..a.rows {
                if a.get(r, col).abs() > a.get(pivot, col).abs() {
                    pivot = r;
                }
            }
            if a.get(pivot, col).abs() <= threshold {
                continue;
            }
            if pivot != row {
                for c in 0..a.cols {
                    let tmp = a.get(row, c);
                    a.set(row, c, a.get(pivot, c));
                    a.set(pivot, c, tmp);
                }
            }
            let lead = a.get(row, col);
            for r in (row + 1)..a.rows {
                let f = a.get(r, col) / lead;
                if f != 0.0 {
                    for c in col..a.cols {
                        let v = a.get(r, c) - f * a.get(row, c);
                        a.set(r, c, v);
                    }
                }
            }
            rank += 1;
            row += 1;
        }
        rank
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn normalize(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

/// Gershgorin bound on |lambda| for a symmetric matrix: max row 1-norm.
fn gershgorin_bound(m: &Matrix) -> f64 {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0_f64, f64::max)
}

/// Largest eigenvalue and a unit eigenvector of a symmetric matrix.
///
/// Power iteration with repeated matrix squaring: after `k` squarings the
/// effective power is 2^k, so even eigenvalue gaps near the floating-point
/// noise floor are resolved. The shift makes the spectrum strictly positive
/// so the most positive eigenvalue dominates in magnitude.
///
/// This is deliberately a different algorithm from the Jacobi sweep in the
/// spectral module; the two serve as cross-checking routes for quantum
/// eigenvalues.
pub fn top_eigenpair(m: &Matrix) -> (f64, Vec<f64>) {
    let n = m.rows();
    assert!(m.is_square());
    if n == 1 {
        return (m.get(0, 0), vec![1.0]);
    }
    let shift = gershgorin_bound(m) + 1.0;
    let mut shifted = m.clone();
    for i in 0..n {
        shifted.set(i, i, shifted.get(i, i) + shift);
    }
    let mut b = shifted.scale(1.0 / shifted.frobenius());
    for _ in 0..64 {
        b = b.matmul(&b);
        let f = b.frobenius();
        b = b.scale(1.0 / f);
    }
    // B is now (numerically) proportional to the projector onto the dominant
    // eigenspace; any nonzero column lies inside it.
    let mut best_col = 0;
    let mut best_norm = -1.0;
    for j in 0..n {
        let cn = norm(&b.column(j));
        if cn > best_norm {
            best_norm = cn;
            best_col = j;
        }
    }
    let mut v = normalize(&b.column(best_col));
    for _ in 0..4 {
        v = normalize(&shifted.mat_vec(&v));
    }
    fix_sign(&mut v);
    let mv = m.mat_vec(&v);
    let lambda = dot(&v, &mv);
    (lambda, v)
}

/// Smallest eigenvalue of a symmetric matrix, via the largest of its negation.
pub fn min_eigenvalue(m: &Matrix) -> f64 {
    -top_eigenpair(&m.scale(-1.0)).0
}

/// (lambda_min, lambda_max) of a symmetric matrix.
pub fn eigenvalue_bounds(m: &Matrix) -> (f64, f64) {
    (min_eigenvalue(m), top_eigenpair(m).0)
}

/// Flip the sign so the largest-magnitude component (first on ties) is positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    let mut best = -1.0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Flip the sign so the first component larger than `threshold` in magnitude
/// is positive. Used for the canonical basis-completion convention.
pub fn fix_sign_first_nonzero(v: &mut [f64], threshold: f64) {
    for x in v.iter() {
        if x.abs() > threshold {
            if *x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Extract the unit vector of a (near) rank-one symmetric PSD matrix.
///
/// Returns the factor `v` with `m ~ v v^T` and the max-norm residual of the
/// reconstruction; callers decide whether the residual passes their purity
/// band. The sign convention follows `fix_sign`.
pub fn rank_one_factor(m: &Matrix) -> Result<(Vec<f64>, f64)> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let mut best = 0;
    for i in 0..n {
        if m.get(i, i) > m.get(best, best) {
            best = i;
        }
    }
    let pivot = m.get(best, best);
    if pivot <= 0.0 {
        return Err(Error::NotPure("matrix has no positive diagonal entry".into()));
    }
    let scale = pivot.sqrt();
    let mut v: Vec<f64> = (0..n).map(|i| m.get(i, best) / scale).collect();
    fix_sign(&mut v);
    let residual = m.max_abs_diff(&Matrix::outer(&v));
    Ok((v, residual))
}

/// Extend a set of orthonormal vectors to a full orthonormal basis.
///
/// Candidates are the canonical basis vectors in index order; each is
/// orthogonalized twice against everything accepted so far, kept when the
/// remainder is non-negligible, and sign-fixed so its first nonzero
/// coordinate is positive.
pub fn complete_orthonormal_basis(existing: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut basis: Vec<Vec<f64>> = existing.to_vec();
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= c * y;
                }
            }
        }
        let n = norm(&v);
        if n > 1e-6 {
            let mut u: Vec<f64> = v.iter().map(|x| x / n).collect();
            fix_sign_first_nonzero(&mut u, 1e-9);
            basis.push(u);
        }
    }
    if basis.len() != dim {
        return Err(Error::NotExtendable(format!(
            "could not complete {} orthonormal vectors to dimension {}",
            existing.len(),
            dim
        )));
    }
    Ok(basis)
}

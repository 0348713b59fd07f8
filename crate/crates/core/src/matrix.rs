//! Dense row-major matrices and the handful of factorizations the solver
//! relies on.
//!
//! Everything here is sized for n <= 12 channels, so the routines favour
//! clarity over blocking. Determinants and inverses go through a
//! partial-pivoting LU; the singular-value routines (rank, condition number)
//! are only used for diagnostics and delegate to `nalgebra`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use thiserror::Error;

use crate::rng::Rng;

/// Relative pivot threshold below which a matrix is declared singular.
pub const SINGULARITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    Shape { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("rows have inconsistent lengths")]
    Ragged,
}

/// Dense real matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad shapes and
    /// non-finite values.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self, MatrixError> {
        Self::from_vec(rows, cols, data.to_vec())
    }

    /// Inverse of [`Matrix::vec`]: reshapes a row-major vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape { rows, cols, expected: rows * cols, got: data.len() });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(MatrixError::NonFinite { row: pos / cols.max(1), col: pos % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(MatrixError::Ragged);
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major vectorization.
    pub fn vec(&self) -> Vec<f64> {
        self.data.clone()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, values: &[f64]) {
        assert_eq!(values.len(), self.rows);
        for (i, &v) in values.iter().enumerate() {
            self[(i, j)] = v;
        }
    }

    /// Gathers the listed columns into a new matrix.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, c| self[(i, cols[c])])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        self.map(|v| v * s)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &Matrix) {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add_scaled");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(l)) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Row vector times matrix: `v * self`.
    pub fn left_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for (l, &a) in v.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(l)) {
                *o += a * b;
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Largest absolute entry (the entrywise infinity norm used for `||UY||`).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Induced infinity norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &nalgebra::DMatrix<f64>) -> Matrix {
        Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>10.6}")).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `+1` for non-negative input, `-1` otherwise. Every decoder shares this
/// tie rule, so an exact zero always decodes as `+1`.
#[inline]
pub fn sign_pm1(v: f64) -> f64 {
    if v >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Partial-pivoting LU factorization, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
    singular: bool,
}

impl Lu {
    pub fn new(a: &Matrix) -> Lu {
        assert!(a.is_square(), "LU of a non-square matrix");
        let n = a.rows();
        let threshold = SINGULARITY_TOL * a.norm_inf().max(1.0);
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax < threshold {
                singular = true;
                break;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                if f != 0.0 {
                    for j in (k + 1)..n {
                        lu[i * n + j] -= f * lu[k * n + j];
                    }
                }
            }
        }
        Lu { n, lu, perm, swaps, singular }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn log_abs_det(&self) -> Option<f64> {
        if self.singular {
            return None;
        }
        Some((0..self.n).map(|k| self.lu[k * self.n + k].abs().ln()).sum())
    }

    pub fn det(&self) -> f64 {
        if self.singular {
            return 0.0;
        }
        let d: f64 = (0..self.n).map(|k| self.lu[k * self.n + k]).product();
        if self.swaps.is_multiple_of(2) {
            d
        } else {
            -d
        }
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.singular {
            return None;
        }
        let n = self.n;
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e)?;
            inv.set_column(j, &col);
        }
        Some(inv)
    }
}

/// `ln |det U|`, or `None` when a pivot falls below the singularity
/// tolerance.
pub fn log_abs_det(u: &Matrix) -> Option<f64> {
    Lu::new(u).log_abs_det()
}

pub fn det(u: &Matrix) -> f64 {
    Lu::new(u).det()
}

pub fn inverse(u: &Matrix) -> Option<Matrix> {
    Lu::new(u).inverse()
}

/// Gradient of `ln |det U|`, which is `U^{-T}`.
///
/// # Panics
/// If `u` is singular; check with [`log_abs_det`] first.
pub fn grad_log_abs_det(u: &Matrix) -> Matrix {
    inverse(u).expect("gradient of log|det| requested at a singular matrix").transpose()
}

fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    nalgebra::SVD::new(m.to_nalgebra(), false, false).singular_values.iter().copied().collect()
}

/// Number of singular values strictly above `tol`.
pub fn rank(m: &Matrix, tol: f64) -> usize {
    singular_values(m).into_iter().filter(|&s| s > tol).count()
}

/// Ratio of the largest to the smallest singular value (`inf` if singular).
pub fn condition_number(m: &Matrix) -> f64 {
    let s = singular_values(m);
    let max = s.iter().copied().fold(0.0, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse of `U + e_i * delta` given `uinv = U^{-1}`.
///
/// Returns `None` when the Sherman-Morrison denominator
/// `1 + delta * U^{-1} e_i` is below the singularity tolerance.
pub fn sherman_morrison_update(uinv: &Matrix, i: usize, delta: &[f64]) -> Option<Matrix> {
    let mut out = uinv.clone();
    sherman_morrison_in_place(&mut out, i, delta)?;
    Some(out)
}

/// In-place variant of [`sherman_morrison_update`]; leaves `uinv` untouched
/// when the update is singular.
pub fn sherman_morrison_in_place(uinv: &mut Matrix, i: usize, delta: &[f64]) -> Option<()> {
    let n = uinv.rows();
    assert!(uinv.is_square() && delta.len() == n && i < n);
    // w = delta * U^{-1} (row vector), c = U^{-1} e_i (column i).
    let w = uinv.left_mul_vec(delta);
    let c = uinv.column(i);
    let denom = 1.0 + w[i];
    if denom.abs() < SINGULARITY_TOL {
        return None;
    }
    for (r, &cr) in c.iter().enumerate() {
        let f = cr / denom;
        if f == 0.0 {
            continue;
        }
        for (x, &wv) in uinv.row_mut(r).iter_mut().zip(&w) {
            *x -= f * wv;
        }
    }
    Some(())
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// columns of Q sign-corrected so that diag(R) is positive.
pub fn random_orthogonal(n: usize, rng: &mut Rng) -> Matrix {
    assert!(n >= 1);
    loop {
        let g = Matrix::from_fn(n, n, |_, _| rng.gaussian());
        let qr = nalgebra::QR::new(g.to_nalgebra());
        let r = qr.r();
        if (0..n).any(|i| r[(i, i)].abs() < 1e-12) {
            continue;
        }
        let mut q = Matrix::from_nalgebra(&qr.q());
        for j in 0..n {
            if r[(j, j)] < 0.0 {
                for i in 0..n {
                    q[(i, j)] = -q[(i, j)];
                }
            }
        }
        return q;
    }
}

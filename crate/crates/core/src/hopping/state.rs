use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::partition::{is_sign_column, make_dominant, partition_from_products, ColumnPartition};
use crate::error::{Error, Result};
use crate::matrix::{inverse, log_abs_det, sherman_morrison_in_place, sign_pm1, Matrix};

/// Entries of `U Y` within this distance of `+-1` are treated as exactly at
/// the bound when forming a vertex key.
const KEY_TOL: f64 = 1e-6;

/// Ratios below this are singular neighbors.
pub const SINGULAR_RATIO: f64 = 1e-9;

/// Identity of a vertex: which entries of `U Y` sit at `+1` and which at
/// `-1`. A vertex is fixed by its active constraints, so two states with the
/// same key are the same point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexKey {
    plus: Vec<u64>,
    minus: Vec<u64>,
}

impl VertexKey {
    pub fn from_products(uy: &Matrix) -> Self {
        let words = uy.as_slice().len().div_ceil(64);
        let mut plus = vec![0u64; words];
        let mut minus = vec![0u64; words];
        for (idx, &v) in uy.as_slice().iter().enumerate() {
            if (v - 1.0).abs() <= KEY_TOL {
                plus[idx / 64] |= 1 << (idx % 64);
            } else if (v + 1.0).abs() <= KEY_TOL {
                minus[idx / 64] |= 1 << (idx % 64);
            }
        }
        Self { plus, minus }
    }

    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopRejection {
    /// The neighbor has `det U' = 0`.
    Singular,
    /// Some column of `U' Y` leaves the feasible box by `excess`.
    Infeasible { excess: f64 },
}

/// A nonsingular vertex in basis form `U = S V^{-1}`.
#[derive(Debug, Clone)]
pub struct VertexState {
    /// Signs of `U V` over the basis columns.
    pub s: Matrix,
    pub u: Matrix,
    /// Maintained by rank-one updates along the search path.
    pub uinv: Matrix,
    /// `log |det U|`, accumulated from neighbor ratios along the path.
    pub objective: f64,
    pub uy: Matrix,
    pub partition: ColumnPartition,
    pub key: VertexKey,
}

impl VertexState {
    /// Builds the state for a vertex near `u`, snapping `U` onto the exact
    /// vertex `S V^{-1}` of its dominant good-column basis.
    pub fn new(u: &Matrix, y: &Matrix, tol: f64) -> Result<Self> {
        let partition = partition_from_products(&u.matmul(y), y, tol)?;
        let s = Matrix::from_fn(y.rows(), y.rows(), |i, p| {
            sign_pm1(u.row(i).iter().zip(y.column(partition.basis[p])).map(|(a, b)| a * b).sum())
        });
        let u = s.matmul(&partition.vinv);
        let uinv = inverse(&u).ok_or(Error::SingularVertex)?;
        let objective = log_abs_det(&u).ok_or(Error::SingularVertex)?;
        let uy = u.matmul(y);
        let mut state = Self { key: VertexKey::from_products(&uy), s, u, uinv, objective, uy, partition };
        state.refresh_columns(tol);
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.s.rows()
    }

    /// `|det U'| / |det U|` for the neighbor with `S[i][j]` negated:
    /// `|1 + delta U^{-1} e_i|` where `delta = -2 S_ij (row j of V^{-1})`.
    pub fn score_neighbor(&self, i: usize, j: usize) -> f64 {
        let scale = -2.0 * self.s[(i, j)];
        let vrow = self.partition.vinv.row(j);
        let acc: f64 = vrow.iter().enumerate().map(|(l, v)| v * self.uinv[(l, i)]).sum();
        (1.0 + scale * acc).abs()
    }

    /// Ratios for all `n^2` flips in row-major `(i, j)` order.
    pub fn neighbor_ratios(&self) -> Vec<f64> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.score_neighbor(i, j)).collect()
    }

    fn flip_direction(&self, i: usize, j: usize) -> Vec<f64> {
        let scale = -2.0 * self.s[(i, j)];
        self.partition.vinv.row(j).iter().map(|v| scale * v).collect()
    }

    /// Row `i` of `U' Y` after flipping `(i, j)` and the largest violation of
    /// the box over the columns outside the basis.
    pub fn flip_row_products(&self, i: usize, j: usize, y: &Matrix) -> (Vec<f64>, f64) {
        let delta = self.flip_direction(i, j);
        let dy = y.left_mul_vec(&delta);
        let row: Vec<f64> = self.uy.row(i).iter().zip(&dy).map(|(a, b)| a + b).collect();
        let mut excess = f64::NEG_INFINITY;
        for (col, v) in row.iter().enumerate() {
            if !self.partition.in_basis(col) {
                excess = excess.max(v.abs() - 1.0);
            }
        }
        (row, excess)
    }

    /// Moves to the neighbor with `S[i][j]` negated, keeping the same basis.
    pub fn hop(&self, i: usize, j: usize, y: &Matrix, feas_tol: f64, tol: f64) -> std::result::Result<Self, HopRejection> {
        let ratio = self.score_neighbor(i, j);
        if ratio < SINGULAR_RATIO {
            return Err(HopRejection::Singular);
        }
        let (row, excess) = self.flip_row_products(i, j, y);
        if excess > feas_tol {
            return Err(HopRejection::Infeasible { excess });
        }
        let delta = self.flip_direction(i, j);
        let mut next = self.clone();
        sherman_morrison_in_place(&mut next.uinv, i, &delta).ok_or(HopRejection::Singular)?;
        next.u.row_mut(i).iter_mut().zip(&delta).for_each(|(u, d)| *u += d);
        next.s[(i, j)] = -next.s[(i, j)];
        next.objective += ratio.ln();
        next.uy.row_mut(i).copy_from_slice(&row);
        next.refresh_columns(tol);
        Ok(next)
    }

    /// Re-derives good and bad columns from `U Y`, moves to a dominant basis
    /// and updates the sign matrix and key to match. `U` is unchanged.
    pub fn rebase(&mut self, y: &Matrix, tol: f64) {
        self.refresh_columns(tol);
        make_dominant(&mut self.partition, y);
        let n = self.n();
        for p in 0..n {
            let col = self.partition.basis[p];
            for i in 0..n {
                self.s[(i, p)] = sign_pm1(self.uy[(i, col)]);
            }
        }
    }

    fn refresh_columns(&mut self, tol: f64) {
        let k = self.uy.cols();
        let (good, bad) = (0..k).partition(|&j| self.partition.in_basis(j) || is_sign_column(&self.uy, j, tol));
        self.partition.good = good;
        self.partition.bad = bad;
        self.key = VertexKey::from_products(&self.uy);
    }

    /// `sign(U Y)` with ties going to `+1`.
    pub fn symbols(&self) -> Matrix {
        self.uy.map(sign_pm1)
    }
}

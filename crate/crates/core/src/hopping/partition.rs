use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::{dot, inverse, Matrix};

/// Minimum Gram-Schmidt residual, relative to the column norm, for a good
/// column to be accepted as a new independent basis direction.
const INDEPENDENCE_TOL: f64 = 1e-8;

/// Columns of `U Y` split by whether they are sign vectors, plus `n`
/// independent good columns of `Y` used to parameterize the vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnPartition {
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
    pub basis: Vec<usize>,
    /// Inverse of the `n x n` matrix formed by the basis columns of `Y`.
    pub vinv: Matrix,
}

impl ColumnPartition {
    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn in_basis(&self, col: usize) -> bool {
        self.basis.contains(&col)
    }
}

pub(crate) fn is_sign_column(uy: &Matrix, j: usize, tol: f64) -> bool {
    (0..uy.rows()).all(|i| (uy[(i, j)].abs() - 1.0).abs() <= tol)
}

/// Splits the columns of `U Y` into good and bad and picks a basis of good
/// columns.
///
/// The basis is first chosen greedily in column order, then refined by
/// exchanges: whenever a good column `y_j` has a coordinate `|c_p| > 1` in
/// the current basis, it replaces basis column `p`. Each exchange multiplies
/// `|det(U V)|` by `|c_p|`, so the process ends at a basis whose sign
/// matrix `U V` has the largest determinant reachable by single exchanges.
/// Stopping rules read neighbor ratios of that sign matrix, so a basis that
/// is not dominant would hide a solved vertex.
pub fn partition_columns(u: &Matrix, y: &Matrix, tol: f64) -> Result<ColumnPartition> {
    let uy = u.matmul(y);
    partition_from_products(&uy, y, tol)
}

pub(crate) fn partition_from_products(uy: &Matrix, y: &Matrix, tol: f64) -> Result<ColumnPartition> {
    let (n, k) = y.shape();
    let (good, bad): (Vec<usize>, Vec<usize>) = (0..k).partition(|&j| is_sign_column(uy, j, tol));

    let mut basis = Vec::with_capacity(n);
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &j in &good {
        if basis.len() == n {
            break;
        }
        let col = y.column(j);
        let norm = dot(&col, &col).sqrt();
        let mut v = col;
        for _ in 0..2 {
            for b in &ortho {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, bv)| *x -= p * bv);
            }
        }
        let resid = dot(&v, &v).sqrt();
        if resid > INDEPENDENCE_TOL * norm {
            v.iter_mut().for_each(|x| *x /= resid);
            ortho.push(v);
            basis.push(j);
        }
    }
    if basis.len() < n {
        return Err(Error::RankDeficient { rank: basis.len(), n });
    }
    let vinv = inverse(&y.select_columns(&basis)).ok_or(Error::RankDeficient { rank: n - 1, n })?;
    let mut part = ColumnPartition { good, bad, basis, vinv };
    make_dominant(&mut part, y);
    Ok(part)
}

/// Largest number of equal-determinant bases examined while looking for an
/// improving exchange, per unit of `n`.
const PLATEAU_BUDGET_PER_ROW: usize = 8;

/// Replaces basis column `p` by a column with coordinates `c` in the current
/// basis. Row `p` of the inverse becomes `row_p / c_p` and every other row
/// `r` becomes `row_r - (c_r / c_p) row_p`.
fn exchange(vinv: &mut Matrix, c: &[f64], p: usize) {
    let pivot_row: Vec<f64> = vinv.row(p).iter().map(|v| v / c[p]).collect();
    for (r, &cr) in c.iter().enumerate() {
        if r == p {
            vinv.row_mut(r).copy_from_slice(&pivot_row);
        } else {
            vinv.row_mut(r).iter_mut().zip(&pivot_row).for_each(|(x, pv)| *x -= cr * pv);
        }
    }
}

/// Exchanges basis columns until no good column has a coordinate above one
/// in magnitude.
///
/// Single improving exchanges can stall below the best subset, so once they
/// run out the search also walks exchanges with `|c_p| = 1`, which keep the
/// determinant, looking for a basis from which an improving exchange exists.
pub(crate) fn make_dominant(part: &mut ColumnPartition, y: &Matrix) {
    let n = part.n();
    let up = 1.0 + 1e-9;
    let budget = PLATEAU_BUDGET_PER_ROW * n;
    let mut swapped = false;
    let mut climbs = 0;
    let climb_limit = 4 * n * y.cols() + 16;
    let candidates = distinct_directions(&part.basis, &part.good, y);
    'climb: while climbs < climb_limit {
        // Breadth-first over the plateau of the current basis.
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue: VecDeque<(Vec<usize>, Matrix)> = VecDeque::new();
        seen.insert(sorted(&part.basis));
        queue.push_back((part.basis.clone(), part.vinv.clone()));
        let mut expanded = 0;
        while let Some((basis, vinv)) = queue.pop_front() {
            if expanded >= budget {
                break;
            }
            expanded += 1;
            let mut best: Option<(usize, usize, f64, Vec<f64>)> = None;
            let mut level: Vec<(usize, usize, Vec<f64>)> = Vec::new();
            for &j in &candidates {
                if basis.contains(&j) {
                    continue;
                }
                let c = vinv.mul_vec(&y.column(j));
                for (p, &cp) in c.iter().enumerate() {
                    let a = cp.abs();
                    if a > up {
                        if best.as_ref().is_none_or(|b| a > b.2) {
                            best = Some((j, p, a, c.clone()));
                        }
                    } else if a > 2.0 - up {
                        level.push((j, p, c.clone()));
                    }
                }
            }
            if let Some((j, p, _, c)) = best {
                part.basis = basis;
                part.vinv = vinv;
                exchange(&mut part.vinv, &c, p);
                part.basis[p] = j;
                swapped = true;
                climbs += 1;
                continue 'climb;
            }
            for (j, p, c) in level {
                let mut next = basis.clone();
                next[p] = j;
                if seen.insert(sorted(&next)) {
                    let mut next_inv = vinv.clone();
                    exchange(&mut next_inv, &c, p);
                    queue.push_back((next, next_inv));
                }
            }
        }
        break;
    }
    if swapped {
        // Refresh to shed round-off from the chained exchanges.
        if let Some(fresh) = inverse(&y.select_columns(&part.basis)) {
            part.vinv = fresh;
        }
    }
}

/// Good columns with one representative per direction up to sign, basis
/// columns first. Repeated symbols make many columns parallel, and
/// exchanging one copy for another changes nothing.
fn distinct_directions(basis: &[usize], good: &[usize], y: &Matrix) -> Vec<usize> {
    let mut reps: Vec<(usize, Vec<f64>)> = Vec::new();
    for &j in basis.iter().chain(good) {
        let mut col = y.column(j);
        let norm = dot(&col, &col).sqrt();
        if norm == 0.0 {
            continue;
        }
        col.iter_mut().for_each(|v| *v /= norm);
        if reps.iter().all(|(_, r)| dot(r, &col).abs() < 1.0 - 1e-12) {
            reps.push((j, col));
        }
    }
    reps.into_iter().map(|(j, _)| j).collect()
}

fn sorted(basis: &[usize]) -> Vec<usize> {
    let mut b = basis.to_vec();
    b.sort_unstable();
    b
}

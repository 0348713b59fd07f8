use super::spectrum::max_det;
use crate::error::{Error, Result};
use crate::matrix::{det, dot, Matrix};
use crate::rng::Rng;

/// Above this many column subsets the check switches to random sampling.
pub const EXHAUSTIVE_SUBSET_LIMIT: u64 = 500_000;

const RANDOM_SUBSET_BUDGET: usize = 500_000;
const RANDOM_SEARCH_SEED: u64 = 0x6d73_7000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MspCheck {
    pub has_msp: bool,
    /// False when the answer came from random subset sampling, in which case
    /// a negative answer is only probabilistic.
    pub exhaustive: bool,
}

fn binomial(m: usize, r: usize) -> u64 {
    if r > m {
        return 0;
    }
    let r = r.min(m - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (m - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Column indices of `x` with duplicates removed up to sign.
fn distinct_columns(x: &Matrix) -> Vec<usize> {
    let mut seen: Vec<Vec<bool>> = Vec::new();
    let mut keep = Vec::new();
    for j in 0..x.cols() {
        let col = x.column(j);
        let flip = col[0] < 0.0;
        let key: Vec<bool> = col.iter().map(|&v| (v < 0.0) != flip).collect();
        if !seen.contains(&key) {
            seen.push(key);
            keep.push(j);
        }
    }
    keep
}

fn subset_is_maximal(x: &Matrix, cols: &[usize], target: u64) -> bool {
    det(&x.select_columns(cols)).abs().round() as u64 == target
}

/// `max_det(n) == n^(n/2)` means a maximal sign matrix is a Hadamard matrix,
/// i.e. its columns are pairwise orthogonal.
fn is_hadamard_order(n: usize, target: u64) -> bool {
    n == 1 || (n.is_multiple_of(2) && (n as u64).checked_pow(n as u32 / 2) == Some(target))
}

/// Depth-first search for `size` pairwise orthogonal vectors among
/// `candidates`, extending `clique`.
fn orthogonal_clique(vecs: &[Vec<f64>], clique: &mut Vec<usize>, candidates: &[usize], size: usize) -> bool {
    if clique.len() == size {
        return true;
    }
    for (pos, &c) in candidates.iter().enumerate() {
        if candidates.len() - pos < size - clique.len() {
            break;
        }
        let rest: Vec<usize> = candidates[pos + 1..].iter().copied().filter(|&d| dot(&vecs[c], &vecs[d]) == 0.0).collect();
        clique.push(c);
        if orthogonal_clique(vecs, clique, &rest, size) {
            return true;
        }
        clique.pop();
    }
    false
}

/// Tries every `n`-subset of `cols` in lexicographic order.
fn any_subset_maximal(x: &Matrix, cols: &[usize], target: u64) -> bool {
    let (n, m) = (x.rows(), cols.len());
    let mut idx: Vec<usize> = (0..n).collect();
    let mut chosen = vec![0; n];
    loop {
        for (c, &i) in chosen.iter_mut().zip(&idx) {
            *c = cols[i];
        }
        if subset_is_maximal(x, &chosen, target) {
            return true;
        }
        let Some(p) = (0..n).rev().find(|&p| idx[p] < m - n + p) else {
            return false;
        };
        idx[p] += 1;
        for q in (p + 1)..n {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Whether some `n` columns of the sign block `x` form a maximal-determinant
/// matrix.
pub fn has_msp(x: &Matrix) -> Result<MspCheck> {
    let (n, k) = x.shape();
    let target = max_det(n).ok_or(Error::UnsupportedN(n))?;
    if k < n {
        return Err(Error::TooFewColumns { n, k });
    }
    let cols = distinct_columns(x);
    let m = cols.len();
    if m < n {
        return Ok(MspCheck { has_msp: false, exhaustive: true });
    }

    if is_hadamard_order(n, target) {
        let vecs: Vec<Vec<f64>> = cols.iter().map(|&j| x.column(j)).collect();
        let all: Vec<usize> = (0..m).collect();
        return Ok(MspCheck { has_msp: orthogonal_clique(&vecs, &mut Vec::new(), &all, n), exhaustive: true });
    }

    if binomial(m, n) <= EXHAUSTIVE_SUBSET_LIMIT {
        return Ok(MspCheck { has_msp: any_subset_maximal(x, &cols, target), exhaustive: true });
    }

    let mut rng = Rng::seed_from(RANDOM_SEARCH_SEED);
    let mut pool = cols.clone();
    for _ in 0..RANDOM_SUBSET_BUDGET {
        // Partial Fisher-Yates: the first n entries become a uniform subset.
        for p in 0..n {
            let q = p + rng.below(m - p);
            pool.swap(p, q);
        }
        if subset_is_maximal(x, &pool[..n], target) {
            return Ok(MspCheck { has_msp: true, exhaustive: false });
        }
    }
    Ok(MspCheck { has_msp: false, exhaustive: false })
}

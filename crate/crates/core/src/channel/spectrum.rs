//! Determinant facts about `{-1,+1}` matrices.

use crate::matrix::{det, Matrix};

const MAX_DET: [u64; 12] = [1, 2, 4, 16, 48, 160, 576, 4096, 14336, 73728, 327680, 2985984];

/// Sizes with a checked-in maximal-determinant witness.
pub const WITNESS_SIZES: std::ops::RangeInclusive<usize> = 1..=12;

const WITNESSES: [&str; 12] = [
    include_str!("../../fixtures/maxdet_01.txt"),
    include_str!("../../fixtures/maxdet_02.txt"),
    include_str!("../../fixtures/maxdet_03.txt"),
    include_str!("../../fixtures/maxdet_04.txt"),
    include_str!("../../fixtures/maxdet_05.txt"),
    include_str!("../../fixtures/maxdet_06.txt"),
    include_str!("../../fixtures/maxdet_07.txt"),
    include_str!("../../fixtures/maxdet_08.txt"),
    include_str!("../../fixtures/maxdet_09.txt"),
    include_str!("../../fixtures/maxdet_10.txt"),
    include_str!("../../fixtures/maxdet_11.txt"),
    include_str!("../../fixtures/maxdet_12.txt"),
];

/// Largest `|det|` over all `n x n` sign matrices, for `1 <= n <= 12`.
pub fn max_det(n: usize) -> Option<u64> {
    n.checked_sub(1).and_then(|i| MAX_DET.get(i)).copied()
}

/// Every attainable `|det|` of an `n x n` sign matrix, for `n <= 6`.
pub fn spectrum(n: usize) -> Option<&'static [u64]> {
    Some(match n {
        1 => &[1],
        2 => &[0, 2],
        3 => &[0, 4],
        4 => &[0, 8, 16],
        5 => &[0, 16, 32, 48],
        6 => &[0, 32, 64, 96, 128, 160],
        _ => return None,
    })
}

/// A sign matrix attaining [`max_det`], parsed from the fixture grids.
pub fn witness(n: usize) -> Option<Matrix> {
    let text = n.checked_sub(1).and_then(|i| WITNESSES.get(i))?;
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|t| t.parse::<f64>().expect("fixture entries are integers")).collect())
        .collect();
    let m = Matrix::from_rows(&rows).expect("fixture rows are consistent");
    assert_eq!(m.shape(), (n, n), "fixture for n = {n} has the wrong shape");
    Some(m)
}

/// `|det|` of each single-entry sign flip of `s`, in row-major flip order.
pub fn neighbor_det_signature(s: &Matrix) -> Vec<u64> {
    assert!(s.is_square());
    let n = s.rows();
    let mut flipped = s.clone();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            flipped[(i, j)] = -flipped[(i, j)];
            out.push(det(&flipped).abs().round() as u64);
            flipped[(i, j)] = -flipped[(i, j)];
        }
    }
    out
}

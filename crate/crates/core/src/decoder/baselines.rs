use crate::error::{Error, Result};
use crate::matrix::{inverse, sign_pm1, Matrix};

/// `sign(A^{-1} Y)` with perfect channel knowledge.
pub fn zero_forcing(y: &Matrix, a: &Matrix) -> Result<Matrix> {
    let ainv = inverse(a).ok_or(Error::SingularVertex)?;
    Ok(ainv.matmul(y).map(sign_pm1))
}

/// Largest size for which exhaustive ML search is allowed.
pub const ML_MAX_N: usize = 14;

/// Candidate `c` in lexicographic order with `-1 < +1`.
fn candidate(n: usize, c: usize) -> Vec<f64> {
    (0..n).map(|r| if c >> (n - 1 - r) & 1 == 1 { 1.0 } else { -1.0 }).collect()
}

/// Per-column maximum-likelihood detection against the channel estimate
/// `a_hat`: the sign vector minimizing `||y_j - A_hat x||^2`, with ties
/// resolved to the lexicographically smallest candidate.
pub fn ml_decode(y: &Matrix, a_hat: &Matrix) -> Matrix {
    let n = a_hat.rows();
    assert!(n <= ML_MAX_N, "exhaustive ML search is limited to n <= {ML_MAX_N}");
    assert_eq!(y.rows(), a_hat.rows());
    let cands: Vec<Vec<f64>> = (0..1usize << n).map(|c| candidate(n, c)).collect();
    let images: Vec<Vec<f64>> = cands.iter().map(|x| a_hat.mul_vec(x)).collect();
    let mut out = Matrix::zeros(a_hat.cols(), y.cols());
    for j in 0..y.cols() {
        let col = y.column(j);
        let mut best = (f64::INFINITY, 0);
        for (c, img) in images.iter().enumerate() {
            let d: f64 = col.iter().zip(img).map(|(a, b)| (a - b) * (a - b)).sum();
            if d < best.0 {
                best = (d, c);
            }
        }
        out.set_column(j, &cands[best.1]);
    }
    out
}

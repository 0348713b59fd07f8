use crate::channel::Atm;
use crate::matrix::Matrix;

fn mismatches(a: &[f64], b: &[f64], sign: f64) -> usize {
    a.iter().zip(b).filter(|(x, y)| **x != sign * **y).count()
}

/// Best signed row alignment of `xhat` to `x`: the transform `T` minimizing
/// mismatches between `T xhat` and `x`, and that mismatch count.
pub fn align(x: &Matrix, xhat: &Matrix) -> (Atm, usize) {
    assert_eq!(x.shape(), xhat.shape());
    let n = x.rows();
    assert!(n <= 20, "alignment by subset DP is limited to n <= 20");
    // cost[i][j]: mismatches when row i of x is matched with +-row j of xhat.
    let mut cost = vec![vec![(0usize, 1.0f64); n]; n];
    for (i, row) in cost.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            let plus = mismatches(x.row(i), xhat.row(j), 1.0);
            let minus = mismatches(x.row(i), xhat.row(j), -1.0);
            *c = if minus < plus { (minus, -1.0) } else { (plus, 1.0) };
        }
    }
    // dp[mask]: least cost assigning x rows 0..popcount(mask) to the xhat
    // rows in mask.
    let full = 1usize << n;
    let mut dp = vec![usize::MAX; full];
    let mut choice = vec![0usize; full];
    dp[0] = 0;
    for mask in 0..full {
        if dp[mask] == usize::MAX {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for (j, &(c, _)) in cost[i].iter().enumerate() {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                let v = dp[mask] + c;
                if v < dp[next] {
                    dp[next] = v;
                    choice[next] = j;
                }
            }
        }
    }
    let mut perm = vec![0; n];
    let mut signs = vec![1.0; n];
    let mut mask = full - 1;
    for i in (0..n).rev() {
        let j = choice[mask];
        perm[i] = j;
        signs[i] = cost[i][j].1;
        mask &= !(1 << j);
    }
    (Atm { perm, signs }, dp[full - 1])
}

/// Bit error rate of `xhat` against `x` after the best signed row
/// alignment.
pub fn ber(x: &Matrix, xhat: &Matrix) -> f64 {
    let (_, errs) = align(x, xhat);
    errs as f64 / x.as_slice().len() as f64
}

//! Certificates of global optimality read off the `n^2` neighbor ratios.
//!
//! Along the vertex graph `|det U'| / |det U|` equals the ratio of the two
//! sign-matrix determinants, so a maximal-determinant sign matrix leaves a
//! characteristic pattern in its neighbors.

use crate::error::{Error, Result};

/// Relative tolerance for matching a ratio against an exact fraction.
pub const RATIO_TOL: f64 = 1e-6;

/// Gap below 1 that counts as a strict decrease.
pub const DECREASE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StoppingRule {
    /// Every nonsingular sign matrix of this size is maximal (`n` = 1, 3).
    AnyVertex,
    /// Every neighbor strictly lowers the objective (`n` = 2, 4, 5).
    AllDecrease,
    /// The neighbor ratios take exactly the listed values (each must
    /// occur) and nothing else (`n` = 6).
    ValueSet(&'static [f64]),
    /// The neighbor ratios take the listed values with exactly the listed
    /// multiplicities (`n` = 8, 10, 12).
    Counts(&'static [(f64, usize)]),
}

const SIX: [f64; 3] = [0.8, 0.6, 0.4];
const EIGHT: [(f64, usize); 1] = [(0.75, 64)];
const TEN: [(f64, usize); 2] = [(2.0 / 3.0, 20), (5.0 / 6.0, 80)];
const TWELVE: [(f64, usize); 1] = [(5.0 / 6.0, 144)];

pub fn stopping_rule(n: usize) -> Result<StoppingRule> {
    Ok(match n {
        1 | 3 => StoppingRule::AnyVertex,
        2 | 4 | 5 => StoppingRule::AllDecrease,
        6 => StoppingRule::ValueSet(&SIX),
        8 => StoppingRule::Counts(&EIGHT),
        10 => StoppingRule::Counts(&TEN),
        12 => StoppingRule::Counts(&TWELVE),
        _ => return Err(Error::UnsupportedN(n)),
    })
}

fn matches(ratio: f64, target: f64) -> bool {
    (ratio - target).abs() <= RATIO_TOL * target
}

/// Whether a vertex whose `n^2` neighbor ratios are `ratios` is a global
/// optimum.
pub fn is_global_optimum(ratios: &[f64], n: usize) -> Result<bool> {
    assert_eq!(ratios.len(), n * n, "need one ratio per entry of the sign matrix");
    Ok(match stopping_rule(n)? {
        StoppingRule::AnyVertex => true,
        StoppingRule::AllDecrease => ratios.iter().all(|&r| r < 1.0 - DECREASE_TOL),
        StoppingRule::ValueSet(values) => {
            ratios.iter().all(|&r| values.iter().any(|&v| matches(r, v)))
                && values.iter().all(|&v| ratios.iter().any(|&r| matches(r, v)))
        }
        StoppingRule::Counts(counts) => {
            counts.iter().map(|&(_, c)| c).sum::<usize>() == ratios.len()
                && counts.iter().all(|&(v, c)| ratios.iter().filter(|&&r| matches(r, v)).count() == c)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{max_det, neighbor_det_signature, witness};
    use crate::matrix::{det, Matrix};

    fn ratios_of(s: &Matrix) -> Vec<f64> {
        let base = det(s).abs();
        neighbor_det_signature(s).into_iter().map(|d| d as f64 / base).collect()
    }

    #[test]
    fn witnesses_satisfy_their_rules() {
        for n in [1, 2, 3, 4, 5, 6, 8, 10, 12] {
            let w = witness(n).unwrap();
            assert!(is_global_optimum(&ratios_of(&w), n).unwrap(), "n = {n}");
        }
        for n in [7, 9, 11, 13] {
            assert_eq!(stopping_rule(n), Err(Error::UnsupportedN(n)));
        }
    }

    #[test]
    fn rules_single_out_maximal_matrices_exhaustively() {
        // Row and column negations preserve every neighbor |det|, so fixing
        // the first row and column to +1 loses nothing.
        for n in 2..=5 {
            let free = (n - 1) * (n - 1);
            for bits in 0u64..(1 << free) {
                let s = Matrix::from_fn(n, n, |i, j| {
                    if i == 0 || j == 0 || bits >> ((i - 1) * (n - 1) + j - 1) & 1 == 0 {
                        1.0
                    } else {
                        -1.0
                    }
                });
                let d = det(&s).abs().round() as u64;
                if d == 0 {
                    continue;
                }
                let maximal = d == max_det(n).unwrap();
                assert_eq!(is_global_optimum(&ratios_of(&s), n).unwrap(), maximal, "n = {n}, bits = {bits}");
            }
        }
    }

    #[test]
    fn six_needs_all_three_values() {
        let mut r = vec![0.8; 6];
        r.extend(vec![0.6; 12]);
        r.extend(vec![0.4; 18]);
        assert!(is_global_optimum(&r, 6).unwrap());
        r[35] = 0.6;
        assert!(is_global_optimum(&r, 6).unwrap());
        let only_two: Vec<f64> = r.iter().map(|&v| if v < 0.5 { 0.6 } else { v }).collect();
        assert!(!is_global_optimum(&only_two, 6).unwrap());
        let mut with_zero = r.clone();
        with_zero[0] = 0.0;
        assert!(!is_global_optimum(&with_zero, 6).unwrap());
    }
}

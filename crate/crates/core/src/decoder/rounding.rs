use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Offsets that snap entries of `U Y` lying within `epsilon` of -1, +1 or 0
/// onto exactly that value: `(U Y - sigma)` is snapped where `sigma` is
/// nonzero and unchanged elsewhere.
pub fn rounding_matrix(uy: &Matrix, epsilon: f64) -> Result<Matrix> {
    validate_epsilon(epsilon)?;
    Ok(uy.map(|x| {
        if (x + 1.0).abs() < epsilon {
            x + 1.0
        } else if (x - 1.0).abs() < epsilon {
            x - 1.0
        } else if x.abs() < epsilon {
            x
        } else {
            0.0
        }
    }))
}

/// The three snapping bins overlap once `epsilon` reaches one half.
pub fn validate_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..0.5).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::AmbiguousEpsilon(epsilon))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(x: f64, eps: f64) -> f64 {
        rounding_matrix(&Matrix::from_row_slice(1, 1, &[x]).unwrap(), eps).unwrap()[(0, 0)]
    }

    #[test]
    fn snaps_to_nearest_target() {
        assert!((single(0.995, 0.01) + 0.005).abs() < 1e-15);
        assert!((0.995 - single(0.995, 0.01) - 1.0).abs() < 1e-15);
        assert!((single(-0.997, 0.01) - 0.003).abs() < 1e-15);
        assert_eq!(single(0.004, 0.01), 0.004);
        assert_eq!(single(0.5, 0.49), 0.0);
        assert_eq!(single(0.99, 0.0), 0.0);
    }

    #[test]
    fn rejects_overlapping_bins() {
        assert_eq!(rounding_matrix(&Matrix::identity(1), 0.5), Err(Error::AmbiguousEpsilon(0.5)));
        assert!(rounding_matrix(&Matrix::identity(1), -0.1).is_err());
    }
}

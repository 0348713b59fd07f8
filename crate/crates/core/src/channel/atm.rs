use crate::matrix::Matrix;
use crate::rng::Rng;

const ENTRY_TOL: f64 = 1e-6;

/// Signed row permutation: row `i` of `T X` is `signs[i] * X[perm[i]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Atm {
    pub perm: Vec<usize>,
    pub signs: Vec<f64>,
}

impl Atm {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), signs: vec![1.0; n] }
    }

    pub fn random(n: usize, rng: &mut Rng) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.below(i + 1));
        }
        let signs = (0..n).map(|_| rng.sign()).collect();
        Self { perm, signs }
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.n();
        let mut t = Matrix::zeros(n, n);
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            t[(i, p)] = s;
        }
        t
    }

    pub fn apply(&self, x: &Matrix) -> Matrix {
        assert_eq!(x.rows(), self.n());
        Matrix::from_fn(x.rows(), x.cols(), |i, j| self.signs[i] * x[(self.perm[i], j)])
    }

    /// `self * other` as transforms: applying the result equals applying
    /// `other` first and then `self`.
    pub fn compose(&self, other: &Atm) -> Atm {
        let perm = self.perm.iter().map(|&p| other.perm[p]).collect();
        let signs = self.perm.iter().zip(&self.signs).map(|(&p, &s)| s * other.signs[p]).collect();
        Atm { perm, signs }
    }

    pub fn inverse(&self) -> Atm {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1.0; n];
        for (i, (&p, &s)) in self.perm.iter().zip(&self.signs).enumerate() {
            perm[p] = i;
            signs[p] = s;
        }
        Atm { perm, signs }
    }
}

fn rows_match(a: &[f64], b: &[f64], sign: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - sign * y).abs() <= ENTRY_TOL)
}

/// Finds a signed row permutation `T` with `x1 == T x2` (entrywise within
/// 1e-6), or `None` if the blocks are not equivalent.
pub fn atm_equivalent(x1: &Matrix, x2: &Matrix) -> Option<Atm> {
    if x1.shape() != x2.shape() {
        return None;
    }
    let n = x1.rows();
    let mut used = vec![false; n];
    let mut perm = Vec::with_capacity(n);
    let mut signs = Vec::with_capacity(n);
    for i in 0..n {
        let hit = (0..n).filter(|&j| !used[j]).find_map(|j| {
            [1.0, -1.0].into_iter().find(|&s| rows_match(x1.row(i), x2.row(j), s)).map(|s| (j, s))
        })?;
        used[hit.0] = true;
        perm.push(hit.0);
        signs.push(hit.1);
    }
    Some(Atm { perm, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_symbols;

    #[test]
    fn swap_and_negate_is_equivalent() {
        let x = Matrix::from_rows(&[vec![1.0, -1.0, 1.0], vec![1.0, 1.0, -1.0], vec![-1.0, -1.0, -1.0]]).unwrap();
        let mut y = x.clone();
        y.row_mut(0).copy_from_slice(x.row(1));
        y.row_mut(1).copy_from_slice(&x.row(0).iter().map(|v| -v).collect::<Vec<_>>());
        let t = atm_equivalent(&y, &x).unwrap();
        assert_eq!(t.apply(&x), y);
        assert_eq!(t.to_matrix().matmul(&x), y);
    }

    #[test]
    fn single_flip_breaks_equivalence() {
        let x = Matrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, -1.0, 1.0]]).unwrap();
        let mut y = x.clone();
        y[(1, 2)] = -1.0;
        assert!(atm_equivalent(&x, &y).is_none());
    }

    #[test]
    fn random_transforms_are_recovered() {
        let mut rng = Rng::seed_from(12);
        for _ in 0..1000 {
            let n = 1 + rng.below(8);
            let x = draw_symbols(n, 3 * n + 5, &mut rng);
            let t = Atm::random(n, &mut rng);
            let tx = t.apply(&x);
            let w = atm_equivalent(&tx, &x).expect("transformed block must be equivalent");
            assert_eq!(w.apply(&x), tx);
        }
    }

    #[test]
    fn compose_and_inverse() {
        let mut rng = Rng::seed_from(2);
        let x = draw_symbols(5, 9, &mut rng);
        let a = Atm::random(5, &mut rng);
        let b = Atm::random(5, &mut rng);
        assert_eq!(a.compose(&b).apply(&x), a.apply(&b.apply(&x)));
        assert_eq!(a.inverse().apply(&a.apply(&x)), x);
    }
}

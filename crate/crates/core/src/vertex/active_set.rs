use crate::matrix::{dot, Matrix};

/// A residual at or below this norm (for a unit-length input) marks a
/// constraint as linearly dependent on those already in its block.
pub const REDUNDANCY_TOL: f64 = 1e-10;

/// The active constraint `<row `row` of U, column `col` of Y> = sign`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub row: usize,
    pub col: usize,
    pub sign: f64,
}

#[derive(Debug, Clone)]
struct Entry {
    constraint: Constraint,
    y_col: Vec<f64>,
    redundant: bool,
}

/// Active constraints on `vec(U)` with an orthonormal basis of their span.
///
/// The constraint on entry `(i, j)` of `U Y` only touches row `i` of `U`, so
/// in row-major `vec(U)` coordinates its normal is `y_j` placed in block `i`
/// and zero elsewhere. Normals in different blocks are orthogonal, so the
/// basis is kept as `n` independent per-block bases of vectors in `R^n`,
/// each grown by Gram-Schmidt as constraints arrive.
#[derive(Debug, Clone)]
pub struct ActiveSet {
    n: usize,
    k: usize,
    entries: Vec<Entry>,
    blocks: Vec<Vec<Vec<f64>>>,
    present: Vec<bool>,
}

impl ActiveSet {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, k, entries: Vec::new(), blocks: vec![Vec::new(); n], present: vec![false; n * k] }
    }

    /// Adds a constraint, returning whether it enlarged the span. Adding the
    /// same `(row, col)` pair twice is a no-op.
    pub fn push(&mut self, c: Constraint, y_col: &[f64]) -> bool {
        assert!(c.row < self.n && c.col < self.k && y_col.len() == self.n);
        let slot = c.row * self.k + c.col;
        if self.present[slot] {
            return false;
        }
        self.present[slot] = true;

        let norm = dot(y_col, y_col).sqrt();
        let mut v: Vec<f64> = y_col.iter().map(|x| x / norm).collect();
        let block = &mut self.blocks[c.row];
        // Two passes of modified Gram-Schmidt keep the block orthonormal to
        // working precision.
        for _ in 0..2 {
            for b in block.iter() {
                let proj = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, bv)| *x -= proj * bv);
            }
        }
        let resid = dot(&v, &v).sqrt();
        let redundant = norm == 0.0 || resid <= REDUNDANCY_TOL || block.len() == self.n;
        if !redundant {
            v.iter_mut().for_each(|x| *x /= resid);
            block.push(v);
        }
        self.entries.push(Entry { constraint: c, y_col: y_col.to_vec(), redundant });
        !redundant
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.present[row * self.k + col]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dimension of the span of the constraint normals.
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n * self.n
    }

    pub fn block_rank(&self, row: usize) -> usize {
        self.blocks[row].len()
    }

    pub fn constraints(&self) -> impl Iterator<Item = Constraint> + '_ {
        self.entries.iter().map(|e| e.constraint)
    }

    pub fn redundant_count(&self) -> usize {
        self.entries.iter().filter(|e| e.redundant).count()
    }

    /// The normal of constraint `idx` as a row of `B`, in `vec(U)` order.
    pub fn normal(&self, idx: usize) -> Vec<f64> {
        let e = &self.entries[idx];
        let mut row = vec![0.0; self.n * self.n];
        let off = e.constraint.row * self.n;
        row[off..off + self.n].copy_from_slice(&e.y_col);
        row
    }

    /// Dense `B`, one row per constraint (redundant ones included).
    pub fn to_matrix(&self) -> Matrix {
        let rows: Vec<Vec<f64>> = (0..self.len()).map(|i| self.normal(i)).collect();
        if rows.is_empty() {
            return Matrix::zeros(0, self.n * self.n);
        }
        Matrix::from_rows(&rows).expect("normals share a length")
    }

    /// Component of `delta` orthogonal to every active constraint normal.
    pub fn project(&self, delta: &Matrix) -> Matrix {
        self.project_counted(delta).0
    }

    /// [`ActiveSet::project`] that also reports how many length-`n` inner
    /// products it spent. At most one per basis vector, so at most `n^2`.
    pub fn project_counted(&self, delta: &Matrix) -> (Matrix, usize) {
        assert_eq!(delta.shape(), (self.n, self.n));
        let mut out = delta.clone();
        let mut products = 0;
        for (i, block) in self.blocks.iter().enumerate() {
            let row = out.row_mut(i);
            for b in block {
                let c = dot(row, b);
                products += 1;
                row.iter_mut().zip(b).for_each(|(x, bv)| *x -= c * bv);
            }
        }
        (out, products)
    }
}

/// Free-function form of [`ActiveSet::project`].
pub fn project_to_nullspace(active: &ActiveSet, delta: &Matrix) -> Matrix {
    active.project(delta)
}

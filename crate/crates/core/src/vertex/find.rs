use thiserror::Error;

use super::active_set::{ActiveSet, Constraint};
use crate::matrix::{dot, random_orthogonal, Lu, Matrix};
use crate::rng::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FindConfig {
    /// How close `|(U Y)_ij|` must be to 1 for the entry to count as active.
    pub activity_tol: f64,
    /// Below this fraction of the unprojected gradient norm, the projected
    /// gradient counts as zero and a level step is taken instead.
    pub stall_tol: f64,
    pub max_iters: usize,
}

impl Default for FindConfig {
    fn default() -> Self {
        Self { activity_tol: 1e-9, stall_tol: 1e-10, max_iters: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VertexError {
    #[error("iterate became singular")]
    SingularIterate,
    #[error("no constraint limits the step")]
    Unbounded,
    #[error("no vertex within {0} iterations")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindStatus {
    /// The active set reached rank `n^2`.
    Vertex,
    /// No ascent or level direction was left before the active set reached
    /// full rank; the caller should restart.
    Stalled,
}

#[derive(Debug, Clone)]
pub struct FoundVertex {
    pub u: Matrix,
    pub active: ActiveSet,
    pub status: FindStatus,
    pub iterations: usize,
    /// `log |det U|` at every iterate, starting with `u0`.
    pub objective_path: Vec<f64>,
    /// Steps taken along a level direction because the projected gradient
    /// vanished.
    pub level_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub t: f64,
    pub newly_active: Vec<Constraint>,
}

/// Random orthogonal matrix scaled so that `max |(U Y)_ij| == 1`.
pub fn feasible_start(y: &Matrix, rng: &mut Rng) -> Matrix {
    let q = random_orthogonal(y.rows(), rng);
    let peak = q.matmul(y).max_abs();
    assert!(peak > 0.0, "observation block is identically zero");
    q.scale(1.0 / peak)
}

/// Longest step along `delta` that keeps `|(U Y)_ij| <= 1`, together with
/// every entry sitting within `tol` of `+-1` at the new point.
pub fn max_step(u: &Matrix, delta: &Matrix, y: &Matrix, tol: f64) -> Result<Step, VertexError> {
    let uy = u.matmul(y);
    let dy = delta.matmul(y);
    let t = limiting_step(delta, y, &uy, &dy, |_, _| false)?;
    Ok(Step { t, newly_active: entries_at_bound(&uy, &dy, t, tol) })
}

fn limiting_step(
    delta: &Matrix,
    y: &Matrix,
    uy: &Matrix,
    dy: &Matrix,
    is_active: impl Fn(usize, usize) -> bool,
) -> Result<f64, VertexError> {
    let (n, k) = uy.shape();
    let row_norms: Vec<f64> = (0..n).map(|i| dot(delta.row(i), delta.row(i)).sqrt()).collect();
    let col_norms: Vec<f64> = (0..k).map(|j| y.column(j).iter().map(|v| v * v).sum::<f64>().sqrt()).collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in 0..k {
            let d = dy[(i, j)];
            // Active entries move only by projection round-off (or by the
            // sub-tolerance residual of a redundant constraint), and
            // directions that are zero up to rounding never limit the step.
            if is_active(i, j) || d.abs() <= 1e-10 * row_norms[i] * col_norms[j] {
                continue;
            }
            let x = uy[(i, j)];
            let t = if d > 0.0 { (1.0 - x) / d } else { (-1.0 - x) / d };
            best = best.min(t.max(0.0));
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(VertexError::Unbounded)
    }
}

fn entries_at_bound(uy: &Matrix, dy: &Matrix, t: f64, tol: f64) -> Vec<Constraint> {
    let (n, k) = uy.shape();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..k {
            let v = uy[(i, j)] + t * dy[(i, j)];
            if (v.abs() - 1.0).abs() <= tol {
                out.push(Constraint { row: i, col: j, sign: v.signum() });
            }
        }
    }
    out
}

/// A feasible direction confined to one row of `U` that is still short of
/// `n` active constraints, for use when the projected gradient vanishes.
///
/// `det U` is affine in each row, so with zero slope along the direction it
/// stays constant while the step activates one more constraint.
fn level_direction(active: &ActiveSet, grad: &Matrix) -> Option<Matrix> {
    let n = grad.rows();
    let row = (0..n).find(|&i| active.block_rank(i) < n)?;
    let mut best: Option<(f64, Matrix)> = None;
    for l in 0..n {
        let mut e = Matrix::zeros(n, n);
        e[(row, l)] = 1.0;
        let d = active.project(&e);
        let norm = d.frobenius();
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, d));
        }
    }
    let (norm, d) = best?;
    if norm < 1e-6 {
        return None;
    }
    let slope = dot(d.as_slice(), grad.as_slice());
    Some(if slope < 0.0 { d.scale(-1.0 / norm) } else { d.scale(1.0 / norm) })
}

/// Walks from the feasible, nonsingular `u0` to a vertex of
/// `{U : |(U Y)_ij| <= 1}` by repeatedly following the gradient of
/// `log |det U|` projected onto the nullspace of the active constraints.
pub fn find_vertex(u0: &Matrix, y: &Matrix, cfg: &FindConfig) -> Result<FoundVertex, VertexError> {
    let (n, k) = y.shape();
    assert_eq!(u0.shape(), (n, n));
    let columns: Vec<Vec<f64>> = (0..k).map(|j| y.column(j)).collect();
    let mut u = u0.clone();
    let mut uy = u.matmul(y);
    let mut active = ActiveSet::new(n, k);
    for c in entries_at_bound(&uy, &Matrix::zeros(n, k), 0.0, cfg.activity_tol) {
        active.push(c, &columns[c.col]);
    }

    let mut objective_path = Vec::new();
    let mut level_steps = 0;
    for iter in 0..cfg.max_iters {
        let lu = Lu::new(&u);
        objective_path.push(lu.log_abs_det().ok_or(VertexError::SingularIterate)?);
        if active.is_full_rank() {
            return Ok(FoundVertex { u, active, status: FindStatus::Vertex, iterations: iter, objective_path, level_steps });
        }
        let grad = lu.inverse().ok_or(VertexError::SingularIterate)?.transpose();
        let mut delta = active.project(&grad);
        if delta.frobenius() <= cfg.stall_tol * grad.frobenius() {
            match level_direction(&active, &grad) {
                Some(d) => {
                    delta = d;
                    level_steps += 1;
                }
                None => {
                    return Ok(FoundVertex { u, active, status: FindStatus::Stalled, iterations: iter, objective_path, level_steps })
                }
            }
        }
        let dy = delta.matmul(y);
        let t = limiting_step(&delta, y, &uy, &dy, |i, j| active.contains(i, j))?;
        u.add_scaled(t, &delta);
        uy = u.matmul(y);
        for c in entries_at_bound(&uy, &Matrix::zeros(n, k), 0.0, cfg.activity_tol) {
            active.push(c, &columns[c.col]);
        }
    }
    Err(VertexError::IterationLimit(cfg.max_iters))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel, draw_symbols, ChannelDistribution};
    use crate::matrix::{log_abs_det, rank};

    fn full_rank_block(n: usize, k: usize, rng: &mut Rng) -> Matrix {
        loop {
            let a = draw_channel(n, ChannelDistribution::Gaussian, rng);
            let y = a.matmul(&draw_symbols(n, k, rng));
            if rank(&y, 1e-9) == n {
                return y;
            }
        }
    }

    #[test]
    fn scalar_step() {
        let u = Matrix::from_row_slice(1, 1, &[0.25]).unwrap();
        let y = Matrix::from_row_slice(1, 1, &[2.0]).unwrap();
        let d = Matrix::from_row_slice(1, 1, &[1.0]).unwrap();
        let s = max_step(&u, &d, &y, 1e-9).unwrap();
        assert_eq!(s.t, 0.25);
        assert_eq!(s.newly_active, vec![Constraint { row: 0, col: 0, sign: 1.0 }]);
    }

    #[test]
    fn entry_at_bound_blocks_immediately() {
        let u = Matrix::identity(2);
        let y = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]).unwrap();
        let d = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(max_step(&u, &d, &y, 1e-9).unwrap().t, 0.0);
    }

    #[test]
    fn zero_direction_is_unbounded() {
        let y = Matrix::identity(2);
        assert_eq!(max_step(&y, &Matrix::zeros(2, 2), &y, 1e-9), Err(VertexError::Unbounded));
    }

    #[test]
    fn step_matches_fine_grid_scan() {
        let mut rng = Rng::seed_from(14);
        for _ in 0..200 {
            let n = 2 + rng.below(4);
            let y = Matrix::from_fn(n, 3 * n, |_, _| rng.gaussian());
            let u = feasible_start(&y, &mut rng).scale(0.7);
            let d = Matrix::from_fn(n, n, |_, _| rng.gaussian());
            let s = max_step(&u, &d, &y, 1e-9).unwrap();
            let at = |t: f64| {
                let mut v = u.clone();
                v.add_scaled(t, &d);
                v.matmul(&y).max_abs()
            };
            assert!((at(s.t) - 1.0).abs() < 1e-9);
            assert!(!s.newly_active.is_empty());
            for step in 0..1000 {
                assert!(at(s.t * step as f64 / 1000.0) <= 1.0 + 1e-9);
            }
            assert!(at(s.t * 1.001) > 1.0);
        }
    }

    #[test]
    fn feasible_start_touches_the_boundary() {
        let mut rng = Rng::seed_from(2);
        let u = feasible_start(&Matrix::identity(3), &mut rng);
        assert!((u.max_abs() - 1.0).abs() < 1e-12);
        for _ in 0..10_000 {
            let y = Matrix::from_fn(3, 5, |_, _| rng.gaussian());
            let u = feasible_start(&y, &mut rng);
            assert!(u.matmul(&y).max_abs() <= 1.0 + 1e-12);
            assert!(log_abs_det(&u).is_some());
        }
    }

    #[test]
    fn scalar_vertex() {
        let y = Matrix::from_row_slice(1, 1, &[2.0]).unwrap();
        let u0 = Matrix::from_row_slice(1, 1, &[0.25]).unwrap();
        let v = find_vertex(&u0, &y, &FindConfig::default()).unwrap();
        assert_eq!(v.status, FindStatus::Vertex);
        assert!((v.u[(0, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_identity_channel_reaches_sign_vertex() {
        let base = [[1.0, 1.0], [1.0, -1.0]];
        let y = Matrix::from_fn(2, 8, |i, j| base[i][j % 2]);
        let mut rng = Rng::seed_from(6);
        for _ in 0..50 {
            let u0 = feasible_start(&y, &mut rng);
            let v = find_vertex(&u0, &y, &FindConfig::default()).unwrap();
            assert_eq!(v.status, FindStatus::Vertex);
            assert!(v.active.rank() >= 4);
            let uy = v.u.matmul(&y);
            assert!(uy.as_slice().iter().all(|x| (x.abs() - 1.0).abs() < 1e-9));
            // |det U| * |det of the two distinct columns| = 2.
            assert!((log_abs_det(&v.u).unwrap().exp() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn walk_keeps_feasibility_and_active_constraints() {
        let mut rng = Rng::seed_from(40);
        let cfg = FindConfig::default();
        for _ in 0..100 {
            let n = 2 + rng.below(5);
            let y = full_rank_block(n, 3 * n + 2, &mut rng);
            let u0 = feasible_start(&y, &mut rng);
            let v = find_vertex(&u0, &y, &cfg).unwrap();
            let uy = v.u.matmul(&y);
            assert!(uy.max_abs() <= 1.0 + cfg.activity_tol);
            for c in v.active.constraints() {
                assert!((uy[(c.row, c.col)] - c.sign).abs() <= 10.0 * cfg.activity_tol);
            }
        }
    }
}

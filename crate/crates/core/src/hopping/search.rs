use std::collections::HashSet;

use super::state::{HopRejection, VertexKey, VertexState, SINGULAR_RATIO};
use super::stopping::is_global_optimum;
use crate::error::Result;
use crate::matrix::Matrix;

/// A rejected neighbor whose violation is below this margin suggests the
/// rejection came from round-off rather than true infeasibility.
const FALSE_TRAP_MARGIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Allowed overshoot of `|(U Y)_ij|` past 1 for a neighbor to be feasible.
    pub feas_tol: f64,
    /// Tolerance for classifying a column of `U Y` as a sign vector.
    pub column_tol: f64,
    /// Vertex budget per search; `None` means `2 n k`.
    pub max_vertices: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { feas_tol: 1e-7, column_tol: 1e-9, max_vertices: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    GlobalOptimum,
    /// Every vertex reachable from the start was expanded without meeting a
    /// stopping certificate.
    Trap,
    VisitLimit,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    /// The certified optimum, or the best vertex seen otherwise.
    pub state: VertexState,
    pub hops: usize,
    pub visited: usize,
    /// Set when a trap was reported although some neighbor was rejected by
    /// less than the false-trap margin.
    pub suspected_false_trap: bool,
}

impl SearchOutcome {
    /// `sign(U Y)` at the final vertex.
    pub fn symbols(&self) -> Matrix {
        self.state.symbols()
    }
}

struct Frame {
    state: VertexState,
    /// Feasible nonsingular flips, best first.
    candidates: Vec<(usize, usize)>,
    cursor: usize,
}

/// Depth-first search over nonsingular vertices starting at the vertex `u0`.
///
/// At each vertex the `n^2` neighbor ratios are checked against the
/// stopping rule for `n`. Otherwise the search moves to the unvisited
/// feasible neighbor with the largest ratio (ties to the smallest `(i, j)`),
/// backtracking through saved snapshots when a vertex runs out of
/// candidates. Sizes without a stopping rule run until the visit limit.
pub fn search(u0: &Matrix, y: &Matrix, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let (n, k) = y.shape();
    let limit = cfg.max_vertices.unwrap_or(2 * n * k).max(1);
    let mut start = VertexState::new(u0, y, cfg.column_tol)?;
    start.rebase(y, cfg.column_tol);

    let mut visited: HashSet<VertexKey> = HashSet::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut best = start.clone();
    let mut hops = 0;
    let mut near_miss = false;

    let mut pending = Some(start);
    loop {
        if let Some(state) = pending.take() {
            visited.insert(state.key.clone());
            if state.objective > best.objective {
                best = state.clone();
            }
            let ratios = state.neighbor_ratios();
            if is_global_optimum(&ratios, n).unwrap_or(false) {
                return Ok(SearchOutcome {
                    status: SearchStatus::GlobalOptimum,
                    state,
                    hops,
                    visited: visited.len(),
                    suspected_false_trap: false,
                });
            }
            if visited.len() >= limit {
                return Ok(SearchOutcome {
                    status: SearchStatus::VisitLimit,
                    state: best,
                    hops,
                    visited: visited.len(),
                    suspected_false_trap: false,
                });
            }
            let mut ranked: Vec<(i64, usize, usize)> = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    let r = ratios[i * n + j];
                    if r < SINGULAR_RATIO {
                        continue;
                    }
                    let (_, excess) = state.flip_row_products(i, j, y);
                    if excess > cfg.feas_tol {
                        near_miss |= excess < FALSE_TRAP_MARGIN;
                        continue;
                    }
                    // Quantized so that ratios equal up to round-off tie.
                    ranked.push((-(r * 1e9).round() as i64, i, j));
                }
            }
            ranked.sort_unstable();
            let candidates = ranked.into_iter().map(|(_, i, j)| (i, j)).collect();
            stack.push(Frame { state, candidates, cursor: 0 });
        }

        let Some(frame) = stack.last_mut() else {
            return Ok(SearchOutcome {
                status: SearchStatus::Trap,
                state: best,
                hops,
                visited: visited.len(),
                suspected_false_trap: near_miss,
            });
        };
        while frame.cursor < frame.candidates.len() {
            let (i, j) = frame.candidates[frame.cursor];
            frame.cursor += 1;
            match frame.state.hop(i, j, y, cfg.feas_tol, cfg.column_tol) {
                Ok(mut next) => {
                    next.rebase(y, cfg.column_tol);
                    if !visited.contains(&next.key) {
                        hops += 1;
                        pending = Some(next);
                        break;
                    }
                }
                Err(HopRejection::Infeasible { excess }) => near_miss |= excess < FALSE_TRAP_MARGIN,
                Err(HopRejection::Singular) => {}
            }
        }
        if pending.is_none() {
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{atm_equivalent, witness};

    #[test]
    fn maximal_start_needs_no_hops() {
        let h = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let y = Matrix::from_fn(2, 8, |i, j| h[(i, j % 2)] * if j % 3 == 0 { -1.0 } else { 1.0 });
        let out = search(&Matrix::identity(2), &y, &SearchConfig::default()).unwrap();
        assert_eq!(out.status, SearchStatus::GlobalOptimum);
        assert_eq!(out.hops, 0);
        assert!(atm_equivalent(&out.symbols(), &y).is_some());
    }

    #[test]
    fn climbs_from_a_non_maximal_sign_matrix() {
        // Square case, V = I: the search runs over all sign matrices.
        let w = witness(4).unwrap();
        let mut s = w.clone();
        s[(0, 0)] = -s[(0, 0)];
        let out = search(&s, &Matrix::identity(4), &SearchConfig::default()).unwrap();
        assert_eq!(out.status, SearchStatus::GlobalOptimum);
        assert!(out.hops >= 1);
        let d = crate::matrix::det(&out.state.u).abs();
        assert!((d - 16.0).abs() < 1e-9);
    }
}

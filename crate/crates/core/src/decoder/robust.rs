use super::rounding::rounding_matrix;
use crate::error::Result;
use crate::matrix::{inverse, Matrix};
use crate::vertex::{find_vertex, FindConfig, FindStatus, VertexError};

#[derive(Debug, Clone, PartialEq)]
pub struct RobustVertex {
    pub u: Matrix,
    /// The observations after rounding, for which `u` is a vertex.
    pub y: Matrix,
    /// Vertex-finding passes performed (at most `n`).
    pub passes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RobustOutcome {
    Found(RobustVertex),
    Stalled,
    Failed(VertexError),
}

/// Vertex finding with rounding for noisy observations.
///
/// Each pass runs vertex finding from the previous point. If the point moved
/// by less than `epsilon` (entrywise) the previous, already rounded point is
/// returned. Otherwise `Y` is nudged by `U^{-1} sigma` so that entries of
/// `U Y` within `epsilon` of -1, 0, +1 land exactly on them. At most `n`
/// passes are made.
///
/// On return every entry of `U Y` is either exactly -1, 0, +1 or at least
/// `epsilon` away from all three.
pub fn robust_find_vertex(u0: &Matrix, y: &Matrix, epsilon: f64, cfg: &FindConfig) -> Result<RobustOutcome> {
    let n = y.rows();
    let mut u = u0.clone();
    let mut y_cur = y.clone();
    for pass in 1..=n {
        let found = match find_vertex(&u, &y_cur, cfg) {
            Ok(v) => v,
            Err(e) => return Ok(RobustOutcome::Failed(e)),
        };
        if found.status == FindStatus::Stalled {
            return Ok(RobustOutcome::Stalled);
        }
        // The first pass starts from an interior point, which is never an
        // answer in itself.
        if pass > 1 && found.u.sub(&u).max_abs() < epsilon {
            return Ok(RobustOutcome::Found(RobustVertex { u, y: y_cur, passes: pass }));
        }
        u = found.u;
        let sigma = rounding_matrix(&u.matmul(&y_cur), epsilon)?;
        if sigma.max_abs() == 0.0 {
            return Ok(RobustOutcome::Found(RobustVertex { u, y: y_cur, passes: pass }));
        }
        let uinv = match inverse(&u) {
            Some(m) => m,
            None => return Ok(RobustOutcome::Failed(VertexError::SingularIterate)),
        };
        y_cur = y_cur.sub(&uinv.matmul(&sigma));
    }
    Ok(RobustOutcome::Found(RobustVertex { u, y: y_cur, passes: n }))
}

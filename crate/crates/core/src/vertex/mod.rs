//! Walking from an interior point to a vertex of the feasible polytope.

mod active_set;
mod find;

pub use active_set::{project_to_nullspace, ActiveSet, Constraint, REDUNDANCY_TOL};
pub use find::{feasible_start, find_vertex, max_step, FindConfig, FindStatus, FoundVertex, Step, VertexError};

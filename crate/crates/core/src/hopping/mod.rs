//! Simplex-style search over nonsingular vertices of the feasible polytope.
//!
//! A vertex is stored in basis form `U = S V^{-1}`: `V` holds `n`
//! independent columns of `Y` at which `U Y` is a sign vector and `S` is
//! the resulting sign matrix. Negating one entry of `S` moves to an adjacent
//! vertex with a rank-one change of `U`, so neighbor objectives come from
//! the matrix determinant lemma and `U^{-1}` is carried along by
//! Sherman-Morrison updates.

mod partition;
mod search;
mod state;
mod stopping;

pub use partition::{partition_columns, ColumnPartition};
pub use search::{search, SearchConfig, SearchOutcome, SearchStatus};
pub use state::{HopRejection, VertexKey, VertexState, SINGULAR_RATIO};
pub use stopping::{is_global_optimum, stopping_rule, StoppingRule, DECREASE_TOL, RATIO_TOL};

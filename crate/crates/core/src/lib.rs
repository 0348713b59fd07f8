//! Blind decoding of real MIMO blocks `Y = A X + N` with BPSK symbols and an
//! unknown channel `A`.
//!
//! The decoder searches for the unmixing matrix `U` of largest `|det U|`
//! subject to `|(U Y)_ij| <= 1`. It first walks from a random interior point
//! to a vertex of that polytope ([`vertex`]), then hops between neighboring
//! vertices with rank-one updates until a determinant-based stopping rule
//! certifies the global optimum ([`hopping`]). [`decoder`] ties the two
//! together with noise-robust rounding and restart handling.

pub mod channel;
pub mod decoder;
pub mod error;
pub mod hopping;
pub mod matrix;
pub mod rng;
pub mod vertex;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use rng::Rng;

//! End-to-end blind decoding, reference decoders and error accounting.

mod baselines;
mod ber;
mod blind;
mod robust;
mod rounding;

pub use baselines::{ml_decode, zero_forcing, ML_MAX_N};
pub use ber::{align, ber};
pub use blind::{blind_decode, blind_decode_with_rng, DecodeConfig, DecodeResult, DecodeStats, DecodeStatus, EPSILON_GRID};
pub use robust::{robust_find_vertex, RobustOutcome, RobustVertex};
pub use rounding::{rounding_matrix, validate_epsilon};

use anyhow::Result;
use rayon::prelude::*;

use blindhop_core::Rng;

/// Generator for trial `trial` of cell `cell`. The stream depends only on
/// the master seed and the indices, never on scheduling.
pub fn trial_rng(master: u64, cell: usize, trial: usize) -> Rng {
    Rng::for_stream(master, ((cell as u64) << 32) | trial as u64)
}

/// Master seed for a second, independent family of streams (decoder start
/// points, channel-estimate errors) derived from the same user seed.
pub fn salted(master: u64, salt: u64) -> u64 {
    (master ^ salt).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(17)
}

/// Runs `f` over `0..count` on a pool of `threads` workers (0 = default) and
/// returns the results in index order.
pub fn run_parallel<T, F>(threads: usize, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(|| (0..count).into_par_iter().map(f).collect()))
}

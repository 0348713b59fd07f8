use std::time::{Duration, Instant};

use log::debug;

use super::robust::{robust_find_vertex, RobustOutcome};
use super::rounding::validate_epsilon;
use crate::error::{Error, Result};
use crate::hopping::{search, SearchConfig, SearchStatus};
use crate::matrix::{rank, sign_pm1, Matrix};
use crate::rng::Rng;
use crate::vertex::{feasible_start, FindConfig};

/// Rounding tolerances tried in order when escalation is enabled.
pub const EPSILON_GRID: [f64; 4] = [0.01, 0.02, 0.05, 0.1];

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeConfig {
    /// Rounding tolerance for noisy observations; 0 disables rounding.
    pub epsilon: f64,
    /// Searches to attempt before declaring an outage.
    pub max_restarts: usize,
    /// Vertex-finding attempts allowed per search before giving up on it.
    pub max_find_attempts: usize,
    pub find: FindConfig,
    pub search: SearchConfig,
    pub seed: u64,
    /// On outage, retry at each larger tolerance in [`EPSILON_GRID`].
    pub escalate: bool,
}

impl Default for DecodeConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            max_restarts: 10,
            max_find_attempts: 50,
            find: FindConfig::default(),
            search: SearchConfig::default(),
            seed: 0,
            escalate: false,
        }
    }
}

impl DecodeConfig {
    pub fn validate(&self) -> Result<()> {
        validate_epsilon(self.epsilon)?;
        if self.max_restarts == 0 || self.max_find_attempts == 0 {
            return Err(Error::Config("restart budgets must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    /// The restart budget ran out without a certified optimum.
    Outage,
    /// Every attempt ended in a numerical breakdown.
    Error,
}

impl DecodeStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Success => "success",
            Self::Outage => "outage",
            Self::Error => "error",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecodeStats {
    /// Searches started beyond the first.
    pub restarts: usize,
    /// Vertex-finding attempts (each a full noise-robust pass sequence).
    pub alg1_calls: usize,
    /// Vertex-hopping searches.
    pub alg3_calls: usize,
    pub hops: usize,
    pub vertices_visited: usize,
    pub rank_deficient: usize,
    pub stalls: usize,
    pub traps: usize,
    pub suspected_false_traps: usize,
    pub visit_limits: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// `sign(U Y)` on success. On an outage, the best guess from the last
    /// search, if any got that far.
    pub xhat: Option<Matrix>,
    pub u: Option<Matrix>,
    pub stats: DecodeStats,
}

impl DecodeResult {
    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

/// Blind decoding with the generator seeded from `cfg.seed`.
pub fn blind_decode(y: &Matrix, cfg: &DecodeConfig) -> Result<DecodeResult> {
    blind_decode_with_rng(y, cfg, &mut Rng::seed_from(cfg.seed))
}

/// Recovers `X` (up to signed row permutation) from `Y = A X + N` without
/// knowing `A`.
///
/// Each attempt draws a random feasible start, runs noise-robust vertex
/// finding until the good columns span `R^n`, then searches the vertex
/// graph. Traps and visit-limit exits restart from a fresh start point.
pub fn blind_decode_with_rng(y: &Matrix, cfg: &DecodeConfig, rng: &mut Rng) -> Result<DecodeResult> {
    let mut res = decode_at(y, cfg, rng)?;
    if !cfg.escalate {
        return Ok(res);
    }
    for &epsilon in EPSILON_GRID.iter().filter(|&&e| e > cfg.epsilon) {
        if res.is_success() {
            break;
        }
        debug!("outage at epsilon {}, retrying at {epsilon}", cfg.epsilon);
        let next = decode_at(y, &DecodeConfig { epsilon, ..cfg.clone() }, rng)?;
        let wall_time = res.stats.wall_time + next.stats.wall_time;
        res = DecodeResult { stats: DecodeStats { wall_time, ..next.stats.clone() }, ..next };
    }
    Ok(res)
}

fn decode_at(y: &Matrix, cfg: &DecodeConfig, rng: &mut Rng) -> Result<DecodeResult> {
    cfg.validate()?;
    let (n, k) = y.shape();
    if k < n {
        return Err(Error::TooFewColumns { n, k });
    }
    if !y.is_finite() {
        return Err(Error::Config("observations contain non-finite values".into()));
    }
    let r = rank(y, 1e-9 * y.max_abs().max(1e-300));
    if r < n {
        return Err(Error::RankDeficient { rank: r, n });
    }

    let started = Instant::now();
    let mut stats = DecodeStats::default();
    let mut fallback: Option<(Matrix, Matrix)> = None;
    let mut numeric_failures = 0;
    let mut attempts = 0;

    for restart in 0..cfg.max_restarts {
        stats.restarts = restart;
        // Vertex finding until the good columns give a usable basis.
        let mut prepared = None;
        for _ in 0..cfg.max_find_attempts {
            stats.alg1_calls += 1;
            attempts += 1;
            let u0 = feasible_start(y, rng);
            match robust_find_vertex(&u0, y, cfg.epsilon, &cfg.find)? {
                RobustOutcome::Found(v) => {
                    match crate::hopping::partition_columns(&v.u, &v.y, cfg.search.column_tol) {
                        Ok(_) => {
                            prepared = Some(v);
                            break;
                        }
                        Err(_) => stats.rank_deficient += 1,
                    }
                }
                RobustOutcome::Stalled => stats.stalls += 1,
                RobustOutcome::Failed(_) => numeric_failures += 1,
            }
        }
        let Some(v) = prepared else {
            debug!("no full-rank good-column set after {} vertex-finding attempts", cfg.max_find_attempts);
            break;
        };

        stats.alg3_calls += 1;
        let outcome = match search(&v.u, &v.y, &cfg.search) {
            Ok(o) => o,
            Err(_) => {
                numeric_failures += 1;
                continue;
            }
        };
        debug!("search {restart}: {:?} after {} hops", outcome.status, outcome.hops);
        stats.hops += outcome.hops;
        stats.vertices_visited += outcome.visited;
        let u = outcome.state.u.clone();
        let xhat = u.matmul(y).map(sign_pm1);
        match outcome.status {
            SearchStatus::GlobalOptimum => {
                stats.wall_time = started.elapsed();
                return Ok(DecodeResult { status: DecodeStatus::Success, xhat: Some(xhat), u: Some(u), stats });
            }
            SearchStatus::Trap => {
                stats.traps += 1;
                stats.suspected_false_traps += usize::from(outcome.suspected_false_trap);
            }
            SearchStatus::VisitLimit => stats.visit_limits += 1,
        }
        fallback = Some((xhat, u));
    }

    stats.wall_time = started.elapsed();
    let status = if fallback.is_none() && numeric_failures == attempts && attempts > 0 {
        DecodeStatus::Error
    } else {
        DecodeStatus::Outage
    };
    let (xhat, u) = fallback.map_or((None, None), |(x, u)| (Some(x), Some(u)));
    Ok(DecodeResult { status, xhat, u, stats })
}

use std::time::Duration;

use anyhow::Result;
use log::info;

use blindhop_core::channel::{atm_equivalent, has_msp, ChannelDistribution, ChannelInstance, NoiseLevel};
use blindhop_core::decoder::{blind_decode_with_rng, DecodeConfig, DecodeStatus};

use crate::output::{num, ratio, Table};
use crate::trials::{run_parallel, salted, trial_rng};

const DECODER_SALT: u64 = 0x7431;

#[derive(Debug, Clone)]
pub struct Table1Params {
    pub cases: Vec<(usize, usize)>,
    pub trials: usize,
    pub epsilon: f64,
    pub channel: ChannelDistribution,
    pub seed: u64,
    pub threads: usize,
}

/// Outcome of one noiseless decode.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Trial {
    /// Certified and equal to `X` up to a signed row permutation.
    pub correct: bool,
    pub status: Option<DecodeStatus>,
    pub msp: bool,
    pub alg1_calls: usize,
    pub alg3_calls: usize,
    pub hops: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub n: usize,
    pub k: usize,
    pub trials: Vec<Table1Trial>,
}

impl Table1Cell {
    pub fn successes(&self) -> usize {
        self.trials.iter().filter(|t| t.correct).count()
    }

    pub fn success_rate(&self) -> f64 {
        self.successes() as f64 / self.trials.len().max(1) as f64
    }

    pub fn msp_trials(&self) -> usize {
        self.trials.iter().filter(|t| t.msp).count()
    }

    pub fn msp_successes(&self) -> usize {
        self.trials.iter().filter(|t| t.msp && t.correct).count()
    }

    /// Certified decodes that do not match `X`.
    pub fn wrong_certified(&self) -> usize {
        self.trials.iter().filter(|t| t.status == Some(DecodeStatus::Success) && !t.correct).count()
    }

    fn mean_over(&self, pick: impl Fn(&Table1Trial) -> usize, only_correct: bool) -> f64 {
        let sel: Vec<&Table1Trial> = self.trials.iter().filter(|t| !only_correct || t.correct).collect();
        if sel.is_empty() {
            return f64::NAN;
        }
        sel.iter().map(|t| pick(t)).sum::<usize>() as f64 / sel.len() as f64
    }

    /// Mean vertex-finding calls over all trials.
    pub fn alg1_calls_mean(&self) -> f64 {
        self.mean_over(|t| t.alg1_calls, false)
    }

    pub fn alg3_calls_mean(&self) -> f64 {
        self.mean_over(|t| t.alg3_calls, false)
    }

    /// Mean vertex-finding calls over correctly decoded trials.
    pub fn alg1_calls_per_solution(&self) -> f64 {
        self.mean_over(|t| t.alg1_calls, true)
    }

    pub fn alg3_calls_per_solution(&self) -> f64 {
        self.mean_over(|t| t.alg3_calls, true)
    }

    pub fn mean_decode_time(&self) -> Duration {
        let total: Duration = self.trials.iter().map(|t| t.wall_time).sum();
        total / self.trials.len().max(1) as u32
    }
}

fn run_trial(n: usize, k: usize, cell: usize, trial: usize, p: &Table1Params) -> Table1Trial {
    let mut rng = trial_rng(p.seed, cell, trial);
    let inst = ChannelInstance::sample(n, k, p.channel, NoiseLevel::Sigma(0.0), &mut rng);
    let msp = has_msp(&inst.x).map(|c| c.has_msp).unwrap_or(false);
    let cfg = DecodeConfig { epsilon: p.epsilon, ..Default::default() };
    let mut dec_rng = trial_rng(salted(p.seed, DECODER_SALT), cell, trial);
    match blind_decode_with_rng(&inst.y, &cfg, &mut dec_rng) {
        Ok(res) => Table1Trial {
            correct: res.is_success() && res.xhat.as_ref().is_some_and(|x| atm_equivalent(x, &inst.x).is_some()),
            status: Some(res.status),
            msp,
            alg1_calls: res.stats.alg1_calls,
            alg3_calls: res.stats.alg3_calls,
            hops: res.stats.hops,
            wall_time: res.stats.wall_time,
        },
        // Rank-deficient blocks (repeated symbol columns) cannot be decoded.
        Err(_) => Table1Trial {
            correct: false,
            status: None,
            msp,
            alg1_calls: 0,
            alg3_calls: 0,
            hops: 0,
            wall_time: Duration::ZERO,
        },
    }
}

pub fn run(p: &Table1Params) -> Result<Vec<Table1Cell>> {
    let mut cells = Vec::with_capacity(p.cases.len());
    for (cell, &(n, k)) in p.cases.iter().enumerate() {
        info!("table1: n={n} k={k}, {} trials", p.trials);
        let trials = run_parallel(p.threads, p.trials, |t| run_trial(n, k, cell, t, p))?;
        cells.push(Table1Cell { n, k, trials });
    }
    Ok(cells)
}

pub fn table(cells: &[Table1Cell], timing: bool) -> Table {
    let mut header = vec![
        "n",
        "k",
        "trials",
        "successes",
        "success_rate",
        "msp_trials",
        "msp_successes",
        "success_rate_given_msp",
        "wrong_certified",
        "alg1_calls_mean",
        "alg3_calls_mean",
        "alg1_calls_per_solution",
        "alg3_calls_per_solution",
        "hops_mean",
        "input_errors",
    ];
    if timing {
        header.push("decode_time_mean_s");
    }
    let mut t = Table::new("blindhop.table1.v1", &header);
    for c in cells {
        let mut row = vec![
            c.n.to_string(),
            c.k.to_string(),
            c.trials.len().to_string(),
            c.successes().to_string(),
            num(c.success_rate()),
            c.msp_trials().to_string(),
            c.msp_successes().to_string(),
            ratio(c.msp_successes(), c.msp_trials()),
            c.wrong_certified().to_string(),
            num(c.alg1_calls_mean()),
            num(c.alg3_calls_mean()),
            num(c.alg1_calls_per_solution()),
            num(c.alg3_calls_per_solution()),
            num(c.mean_over(|t| t.hops, false)),
            c.trials.iter().filter(|t| t.status.is_none()).count().to_string(),
        ];
        if timing {
            row.push(num(c.mean_decode_time().as_secs_f64()));
        }
        t.push(row);
    }
    t
}

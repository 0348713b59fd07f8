use anyhow::Result;
use log::info;

use blindhop_core::channel::{ChannelDistribution, ChannelInstance, NoiseLevel};
use blindhop_core::vertex::{feasible_start, find_vertex, FindConfig};

use crate::output::{num, Table};
use crate::trials::{run_parallel, trial_rng};

/// Entries within this distance of a level count as sitting on it.
pub const LEVEL_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct DistParams {
    pub n: usize,
    pub ks: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EntryCounts {
    pub at_bound: u64,
    pub zero: u64,
    pub interior: u64,
    /// Trials where vertex finding broke down and produced no output.
    pub failed: u64,
    /// Trials whose walk needed at least one level step.
    pub level_step_trials: u64,
}

impl EntryCounts {
    pub fn total(&self) -> u64 {
        self.at_bound + self.zero + self.interior
    }

    pub fn fractions(&self) -> (f64, f64, f64) {
        let t = self.total().max(1) as f64;
        (self.at_bound as f64 / t, self.zero as f64 / t, self.interior as f64 / t)
    }

    fn merge(mut self, o: Self) -> Self {
        self.at_bound += o.at_bound;
        self.zero += o.zero;
        self.interior += o.interior;
        self.failed += o.failed;
        self.level_step_trials += o.level_step_trials;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistCell {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub counts: EntryCounts,
}

fn classify(n: usize, k: usize, cell: usize, trial: usize, seed: u64) -> EntryCounts {
    let mut rng = trial_rng(seed, cell, trial);
    let inst = ChannelInstance::sample(n, k, ChannelDistribution::Gaussian, NoiseLevel::Sigma(0.0), &mut rng);
    let u0 = feasible_start(&inst.y, &mut rng);
    let Ok(found) = find_vertex(&u0, &inst.y, &FindConfig::default()) else {
        return EntryCounts { failed: 1, ..Default::default() };
    };
    let mut c = EntryCounts { level_step_trials: u64::from(found.level_steps > 0), ..Default::default() };
    for &v in found.u.matmul(&inst.y).as_slice() {
        if (v.abs() - 1.0).abs() <= LEVEL_TOL {
            c.at_bound += 1;
        } else if v.abs() <= LEVEL_TOL {
            c.zero += 1;
        } else {
            c.interior += 1;
        }
    }
    c
}

pub fn run(p: &DistParams) -> Result<Vec<DistCell>> {
    let mut out = Vec::with_capacity(p.ks.len());
    for (cell, &k) in p.ks.iter().enumerate() {
        info!("dist: n={} k={k}, {} trials", p.n, p.trials);
        let counts = run_parallel(p.threads, p.trials, |t| classify(p.n, k, cell, t, p.seed))?;
        let counts = counts.into_iter().fold(EntryCounts::default(), EntryCounts::merge);
        out.push(DistCell { n: p.n, k, trials: p.trials, counts });
    }
    Ok(out)
}

pub fn table(cells: &[DistCell]) -> Table {
    let mut t = Table::new(
        "blindhop.dist.v1",
        &["n", "k", "trials", "entries", "frac_pm1", "frac_zero", "frac_interior", "failed_trials", "level_step_trials"],
    );
    for c in cells {
        let (b, z, i) = c.counts.fractions();
        t.push(vec![
            c.n.to_string(),
            c.k.to_string(),
            c.trials.to_string(),
            c.counts.total().to_string(),
            num(b),
            num(z),
            num(i),
            c.counts.failed.to_string(),
            c.counts.level_step_trials.to_string(),
        ]);
    }
    t
}

use anyhow::{bail, Result};
use log::info;

use blindhop_core::channel::{draw_symbols, has_msp, max_det};

use crate::output::{num, Table};
use crate::trials::{run_parallel, trial_rng};

#[derive(Debug, Clone)]
pub struct MspParams {
    pub cells: Vec<(usize, usize)>,
    pub trials: usize,
    pub seed: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MspCell {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub hits: usize,
    /// Trials answered by random subset sampling rather than a full search.
    pub sampled: usize,
}

impl MspCell {
    pub fn probability(&self) -> f64 {
        self.hits as f64 / self.trials.max(1) as f64
    }
}

/// Expands `n` values and a `k` list (or `n..=kmax`) into cells.
pub fn cells(ns: &[usize], ks: &[usize], kmax: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &n in ns {
        if ks.is_empty() {
            out.extend((n..=kmax).map(|k| (n, k)));
        } else {
            out.extend(ks.iter().filter(|&&k| k >= n).map(|&k| (n, k)));
        }
    }
    out
}

pub fn run(p: &MspParams) -> Result<Vec<MspCell>> {
    let mut out = Vec::with_capacity(p.cells.len());
    for (cell, &(n, k)) in p.cells.iter().enumerate() {
        if max_det(n).is_none() {
            bail!("no maximal determinant on record for n = {n}");
        }
        info!("msp: n={n} k={k}, {} trials", p.trials);
        let checks = run_parallel(p.threads, p.trials, |t| {
            let x = draw_symbols(n, k, &mut trial_rng(p.seed, cell, t));
            has_msp(&x).expect("n and k were validated")
        })?;
        out.push(MspCell {
            n,
            k,
            trials: p.trials,
            hits: checks.iter().filter(|c| c.has_msp).count(),
            sampled: checks.iter().filter(|c| !c.exhaustive).count(),
        });
    }
    Ok(out)
}

pub fn table(cells: &[MspCell]) -> Table {
    let mut t = Table::new("blindhop.msp.v1", &["n", "k", "trials", "msp_count", "msp_probability", "sampled_checks"]);
    for c in cells {
        t.push(vec![
            c.n.to_string(),
            c.k.to_string(),
            c.trials.to_string(),
            c.hits.to_string(),
            num(c.probability()),
            c.sampled.to_string(),
        ]);
    }
    t
}

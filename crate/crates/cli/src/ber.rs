use anyhow::{bail, Result};
use log::info;

use blindhop_core::channel::{ChannelDistribution, ChannelInstance, NoiseLevel};
use blindhop_core::decoder::{align, blind_decode_with_rng, ml_decode, validate_epsilon, zero_forcing, DecodeConfig, ML_MAX_N};
use blindhop_core::matrix::condition_number;
use blindhop_core::Matrix;

use crate::args::DecoderSpec;
use crate::output::{num, ratio, Table};
use crate::trials::{run_parallel, salted, trial_rng};

const VH_SALT: u64 = 0x7668;
const ML_SALT: u64 = 0x6d6c;

#[derive(Debug, Clone)]
pub struct BerParams {
    pub n: usize,
    pub k: usize,
    pub snr_db: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub decoders: Vec<DecoderSpec>,
    pub trials: usize,
    pub channel: ChannelDistribution,
    pub max_restarts: usize,
    pub escalate: bool,
    pub seed: u64,
    pub threads: usize,
}

/// One decoder run on one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BerSample {
    pub decoder: DecoderSpec,
    /// Set for the blind decoder only.
    pub epsilon: Option<f64>,
    /// Whether a symbol estimate was produced. Baselines always complete.
    pub completed: bool,
    pub bit_errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerTrial {
    pub kappa: f64,
    pub samples: Vec<BerSample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub trials: Vec<BerTrial>,
}

/// Aggregate for one decoder (and tolerance) at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerSummary {
    pub decoder: DecoderSpec,
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub completed: usize,
    pub bit_errors: usize,
    pub bits: usize,
}

impl BerSummary {
    /// Errors per decoded bit, over completed blocks only.
    pub fn ber(&self) -> f64 {
        if self.bits == 0 {
            f64::NAN
        } else {
            self.bit_errors as f64 / self.bits as f64
        }
    }

    pub fn completion(&self) -> f64 {
        self.completed as f64 / self.trials.max(1) as f64
    }
}

impl BerPoint {
    pub fn summaries(&self, n: usize, k: usize) -> Vec<BerSummary> {
        let Some(first) = self.trials.first() else { return Vec::new() };
        (0..first.samples.len())
            .map(|idx| {
                let head = &first.samples[idx];
                let mut s = BerSummary {
                    decoder: head.decoder,
                    epsilon: head.epsilon,
                    trials: self.trials.len(),
                    completed: 0,
                    bit_errors: 0,
                    bits: 0,
                };
                for t in &self.trials {
                    let x = &t.samples[idx];
                    if x.completed {
                        s.completed += 1;
                        s.bit_errors += x.bit_errors;
                        s.bits += n * k;
                    }
                }
                s
            })
            .collect()
    }

    pub fn summary(&self, n: usize, k: usize, decoder: DecoderSpec, epsilon: Option<f64>) -> Option<BerSummary> {
        self.summaries(n, k).into_iter().find(|s| s.decoder == decoder && s.epsilon == epsilon)
    }
}

fn validate(p: &BerParams) -> Result<()> {
    if p.n == 0 || p.k < p.n {
        bail!("need 1 <= n <= k");
    }
    for &e in &p.epsilons {
        validate_epsilon(e)?;
    }
    if p.decoders.iter().any(|d| matches!(d, DecoderSpec::MaximumLikelihood { .. })) && p.n > ML_MAX_N {
        bail!("ML decoding enumerates 2^n candidates; n = {} exceeds {ML_MAX_N}", p.n);
    }
    if p.max_restarts == 0 {
        bail!("max-restarts must be at least 1");
    }
    Ok(())
}

fn run_trial(p: &BerParams, cell: usize, snr_db: f64, trial: usize) -> BerTrial {
    let mut rng = trial_rng(p.seed, cell, trial);
    let inst = ChannelInstance::sample(p.n, p.k, p.channel, NoiseLevel::SnrDb(snr_db), &mut rng);
    let errors = |xhat: &Matrix| align(&inst.x, xhat).1;
    let mut samples = Vec::new();
    for &decoder in &p.decoders {
        match decoder {
            DecoderSpec::VertexHopping => {
                for &eps in &p.epsilons {
                    let cfg = DecodeConfig { epsilon: eps, max_restarts: p.max_restarts, escalate: p.escalate, ..Default::default() };
                    // Same start points for every tolerance.
                    let mut dec_rng = trial_rng(salted(p.seed, VH_SALT), cell, trial);
                    let decoded = blind_decode_with_rng(&inst.y, &cfg, &mut dec_rng)
                        .ok()
                        .filter(|r| r.is_success())
                        .and_then(|r| r.xhat);
                    samples.push(BerSample {
                        decoder,
                        epsilon: Some(eps),
                        completed: decoded.is_some(),
                        bit_errors: decoded.as_ref().map_or(0, errors),
                    });
                }
            }
            DecoderSpec::ZeroForcing => {
                let xhat = zero_forcing(&inst.y, &inst.a).expect("sampled channels are nonsingular");
                samples.push(BerSample { decoder, epsilon: None, completed: true, bit_errors: errors(&xhat) });
            }
            DecoderSpec::MaximumLikelihood { rho } => {
                let mut est_rng = trial_rng(salted(p.seed, ML_SALT ^ rho.to_bits()), cell, trial);
                let sd = (rho * inst.sigma * inst.sigma).sqrt();
                let a_hat = Matrix::from_fn(p.n, p.n, |i, j| inst.a[(i, j)] + sd * est_rng.gaussian());
                let xhat = ml_decode(&inst.y, &a_hat);
                samples.push(BerSample { decoder, epsilon: None, completed: true, bit_errors: errors(&xhat) });
            }
        }
    }
    BerTrial { kappa: condition_number(&inst.a), samples }
}

pub fn run(p: &BerParams) -> Result<Vec<BerPoint>> {
    validate(p)?;
    let mut out = Vec::with_capacity(p.snr_db.len());
    for (cell, &snr_db) in p.snr_db.iter().enumerate() {
        info!("ber: snr={snr_db} dB, {} trials", p.trials);
        let trials = run_parallel(p.threads, p.trials, |t| run_trial(p, cell, snr_db, t))?;
        out.push(BerPoint { snr_db, trials });
    }
    Ok(out)
}

pub fn table(points: &[BerPoint], n: usize, k: usize) -> Table {
    let mut t = Table::new(
        "blindhop.ber.v1",
        &["snr_db", "decoder", "epsilon", "trials", "completed", "completion", "bit_errors", "bits", "ber"],
    );
    for p in points {
        for s in p.summaries(n, k) {
            t.push(vec![
                num(p.snr_db),
                s.decoder.label(),
                s.epsilon.map(num).unwrap_or_default(),
                s.trials.to_string(),
                s.completed.to_string(),
                ratio(s.completed, s.trials),
                s.bit_errors.to_string(),
                s.bits.to_string(),
                num(s.ber()),
            ]);
        }
    }
    t
}

pub fn trials_table(points: &[BerPoint]) -> Table {
    let mut t =
        Table::new("blindhop.ber_trials.v1", &["snr_db", "trial", "decoder", "epsilon", "completed", "bit_errors", "kappa"]);
    for p in points {
        for (idx, trial) in p.trials.iter().enumerate() {
            for s in &trial.samples {
                t.push(vec![
                    num(p.snr_db),
                    idx.to_string(),
                    s.decoder.label(),
                    s.epsilon.map(num).unwrap_or_default(),
                    u8::from(s.completed).to_string(),
                    s.bit_errors.to_string(),
                    num(trial.kappa),
                ]);
            }
        }
    }
    t
}

//! Experiment harness behind the `blindhop` binary: noiseless success
//! tables, MSP sampling, BER sweeps against baseline decoders, and the
//! distribution of vertex-finding outputs. Every command writes CSV with a
//! leading `# schema=` line and is deterministic under `--seed`.

pub mod args;
pub mod ber;
pub mod config;
pub mod dist;
pub mod msp;
pub mod output;
pub mod table1;
pub mod trials;

use std::ffi::OsString;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use blindhop_core::decoder::{blind_decode, DecodeConfig, DecodeStatus};
use blindhop_core::Matrix;

use args::{Cli, Command, DecodeArgs};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    /// Bad arguments, unreadable input, or input the decoder cannot accept.
    Usage = 1,
    /// The decoder gave up on the block.
    Outage = 2,
}

impl From<Exit> for ExitCode {
    fn from(e: Exit) -> Self {
        ExitCode::from(e as u8)
    }
}

/// Parses `args` (program name first), expanding any `--config` file, and
/// runs the command.
pub fn main_with_args(args: Vec<OsString>) -> Exit {
    let cli = match config::expand_config(args).map(Cli::try_parse_from) {
        Ok(Ok(cli)) => cli,
        Ok(Err(e)) => {
            let exit = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            let _ = e.print();
            return exit;
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return Exit::Usage;
        }
    };
    match run(&cli) {
        Ok(exit) => exit,
        Err(e) => {
            eprintln!("error: {e:#}");
            Exit::Usage
        }
    }
}

pub fn run(cli: &Cli) -> Result<Exit> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Decode(a) => decode(a, cli),
        Command::Table1(a) => {
            if !a.slow && a.cases.0.iter().any(|&(n, _)| n >= 10) {
                bail!("cells with n >= 10 take seconds per decode; pass --slow to run them");
            }
            let params = table1::Table1Params {
                cases: a.cases.0.clone(),
                trials: a.trials,
                epsilon: a.epsilon,
                channel: a.channel,
                seed: cli.seed,
                threads: cli.threads,
            };
            output::emit(&table1::table(&table1::run(&params)?, cli.timing), out)?;
            Ok(Exit::Ok)
        }
        Command::Msp(a) => {
            let params = msp::MspParams { cells: msp::cells(&a.n, &a.k, a.kmax), trials: a.trials, seed: cli.seed, threads: cli.threads };
            output::emit(&msp::table(&msp::run(&params)?), out)?;
            Ok(Exit::Ok)
        }
        Command::Ber(a) => {
            let params = ber::BerParams {
                n: a.n,
                k: a.k,
                snr_db: a.snr.0.clone(),
                epsilons: a.epsilon.clone(),
                decoders: a.decoders.clone(),
                trials: a.trials,
                channel: a.channel,
                max_restarts: a.max_restarts,
                escalate: a.escalate,
                seed: cli.seed,
                threads: cli.threads,
            };
            let points = ber::run(&params)?;
            output::emit(&ber::table(&points, a.n, a.k), out)?;
            if let Some(path) = &a.trials_out {
                output::emit(&ber::trials_table(&points), Some(path))?;
            }
            Ok(Exit::Ok)
        }
        Command::Dist(a) => {
            let params = dist::DistParams { n: a.n, ks: a.k.clone(), trials: a.trials, seed: cli.seed, threads: cli.threads };
            output::emit(&dist::table(&dist::run(&params)?), out)?;
            Ok(Exit::Ok)
        }
    }
}

fn decode(a: &DecodeArgs, cli: &Cli) -> Result<Exit> {
    let y: Matrix = output::read_matrix(&a.input)?;
    if y.rows() != a.n {
        bail!("input has {} rows, expected n = {}", y.rows(), a.n);
    }
    let cfg = DecodeConfig { epsilon: a.epsilon, max_restarts: a.max_restarts, seed: cli.seed, escalate: a.escalate, ..Default::default() };
    let res = blind_decode(&y, &cfg).context("input rejected by the decoder")?;
    log::info!("decode: {} after {} searches, {} hops", res.status.as_str(), res.stats.alg3_calls, res.stats.hops);
    match (res.status, &res.xhat) {
        (DecodeStatus::Success, Some(xhat)) => {
            output::emit(&output::symbols_table(xhat), cli.out.as_deref())?;
            Ok(Exit::Ok)
        }
        _ => {
            eprintln!("decode {}: no certified solution", res.status.as_str());
            Ok(Exit::Outage)
        }
    }
}

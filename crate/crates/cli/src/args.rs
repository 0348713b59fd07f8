use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use blindhop_core::channel::ChannelDistribution;

#[derive(Debug, Parser)]
#[command(name = "blindhop", version, about = "Blind MIMO decoding by vertex hopping", args_override_self = true)]
pub struct Cli {
    /// Worker threads for trial-parallel commands (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Add wall-time columns. Off by default so output is byte-identical
    /// between runs.
    #[arg(long, global = true)]
    pub timing: bool,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decode one observation block read from CSV.
    Decode(DecodeArgs),
    /// Noiseless success rates and call counts per (n, k) cell.
    Table1(Table1Args),
    /// Probability that a uniform sign block has a maximal subset.
    Msp(MspArgs),
    /// Bit error rate against SNR for the blind decoder and baselines.
    Ber(BerArgs),
    /// Distribution of the entries of U Y after vertex finding.
    Dist(DistArgs),
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Expected number of rows of the input.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 10)]
    pub max_restarts: usize,
    /// On outage, retry at each larger tolerance of the 0.01/0.02/0.05/0.1
    /// grid.
    #[arg(long)]
    pub escalate: bool,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Comma-separated `n:k` cells.
    #[arg(long, default_value = "2:8,3:13,4:18,5:18,6:22,8:30", value_parser = parse_cases)]
    pub cases: Cases,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// Rounding tolerance passed to the decoder; the runs are noiseless.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = ChannelDistribution::Gaussian)]
    pub channel: ChannelDistribution,
    /// Allow cells with n >= 10, which take seconds per decode.
    #[arg(long)]
    pub slow: bool,
}

#[derive(Debug, Args)]
pub struct MspArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    pub n: Vec<usize>,
    /// Largest k; every k from n up to this is tabulated unless `--k` is set.
    #[arg(long, default_value_t = 40)]
    pub kmax: usize,
    /// Explicit k values, overriding the `n..=kmax` range.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Args)]
pub struct BerArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 30)]
    pub k: usize,
    /// `start:step:stop` in dB, or a comma-separated list.
    #[arg(long, default_value = "10:2:30", value_parser = parse_snr)]
    pub snr: SnrGrid,
    /// One or more rounding tolerances for the blind decoder.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    pub epsilon: Vec<f64>,
    /// `vh` (blind), `zf` (zero-forcing, perfect CSI), `ml:<rho>` (ML with
    /// channel error variance rho * sigma^2).
    #[arg(long, value_delimiter = ',', default_value = "vh,zf,ml:0.01", value_parser = parse_decoder)]
    pub decoders: Vec<DecoderSpec>,
    #[arg(long, default_value_t = 2000)]
    pub trials: usize,
    #[arg(long, default_value_t = ChannelDistribution::Gaussian)]
    pub channel: ChannelDistribution,
    #[arg(long, default_value_t = 10)]
    pub max_restarts: usize,
    /// On outage, retry at each larger tolerance of the 0.01/0.02/0.05/0.1
    /// grid.
    #[arg(long)]
    pub escalate: bool,
    /// Also write one row per trial and decoder, with the channel condition
    /// number.
    #[arg(long)]
    pub trials_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "8,12,16,20")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cases(pub Vec<(usize, usize)>);

#[derive(Debug, Clone, PartialEq)]
pub struct SnrGrid(pub Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderSpec {
    VertexHopping,
    ZeroForcing,
    MaximumLikelihood { rho: f64 },
}

impl DecoderSpec {
    pub fn label(&self) -> String {
        match self {
            Self::VertexHopping => "vh".into(),
            Self::ZeroForcing => "zf".into(),
            Self::MaximumLikelihood { rho } => format!("ml:{rho}"),
        }
    }
}

pub fn parse_cases(s: &str) -> Result<Cases, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (n, k) = part.split_once(':').ok_or_else(|| format!("case `{part}` is not n:k"))?;
        let n: usize = n.parse().map_err(|_| format!("bad n in `{part}`"))?;
        let k: usize = k.parse().map_err(|_| format!("bad k in `{part}`"))?;
        if n == 0 || k < n {
            return Err(format!("case `{part}` needs 1 <= n <= k"));
        }
        out.push((n, k));
    }
    if out.is_empty() {
        return Err("no cases given".into());
    }
    Ok(Cases(out))
}

pub fn parse_snr(s: &str) -> Result<SnrGrid, String> {
    let num = |v: &str| v.trim().parse::<f64>().map_err(|_| format!("bad SNR value `{v}`"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(format!("SNR range `{s}` is not start:step:stop"));
        };
        let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
        if step <= 0.0 || stop < start {
            return Err(format!("SNR range `{s}` is empty"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok(SnrGrid((0..count).map(|i| start + step * i as f64).collect()));
    }
    let values = s.split(',').map(num).collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("no SNR values".into());
    }
    Ok(SnrGrid(values))
}

pub fn parse_decoder(s: &str) -> Result<DecoderSpec, String> {
    match s.trim() {
        "vh" => Ok(DecoderSpec::VertexHopping),
        "zf" => Ok(DecoderSpec::ZeroForcing),
        other => {
            let rho = other
                .strip_prefix("ml:")
                .or_else(|| (other == "ml").then_some("0.01"))
                .ok_or_else(|| format!("unknown decoder `{other}` (expected vh, zf or ml:<rho>)"))?;
            let rho: f64 = rho.parse().map_err(|_| format!("bad rho in `{other}`"))?;
            if !(rho >= 0.0 && rho.is_finite()) {
                return Err(format!("rho must be finite and non-negative in `{other}`"));
            }
            Ok(DecoderSpec::MaximumLikelihood { rho })
        }
    }
}

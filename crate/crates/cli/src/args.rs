use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gauss_secrecy::lp::ScoreMode;
use gauss_secrecy::quantizer::Reconstruction;
use gauss_secrecy::schemes::SchemeId;
use gauss_secrecy::sim::{Scenario, SimScheme};
use gauss_secrecy::verify::Suite;

#[derive(Debug, Parser)]
#[command(
    name = "gauss-secrecy",
    version,
    about = "Secrecy rate-payoff curves for Gaussian source compression"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the key rate and emit one row per scheme and grid point.
    Curve(CurveArgs),
    /// Monte Carlo run of one per-symbol scheme.
    Sim(SimArgs),
    /// Solve the quantized secrecy LP at one rate pair.
    Lp(LpArgs),
    /// Per-quantizer entropies and distortions.
    QuantizerStats(QuantizerStatsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Source variance σ0².
    #[arg(long, default_value_t = 1.0)]
    pub sigma2: f64,
    /// Source mean μ0.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// `START:STOP:STEP` in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl RateRange {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for RateRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected START:STOP:STEP, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("step must be positive, got {step}"));
        }
        if start > stop {
            return Err(format!("start {start} exceeds stop {stop}"));
        }
        if start < 0.0 {
            return Err(format!("rates must be nonnegative, got {start}"));
        }
        Ok(Self { start, stop, step })
    }
}

fn parse_with<T: FromStr<Err = gauss_secrecy::error::Error>>(s: &str) -> Result<T, String> {
    s.parse()
        .map_err(|e: gauss_secrecy::error::Error| e.to_string())
}

fn parse_reconstruction(s: &str) -> Result<Reconstruction, String> {
    match s {
        "lattice" => Ok(Reconstruction::Lattice),
        "centroid" => Ok(Reconstruction::Centroid),
        _ => Err(format!(
            "unknown reconstruction `{s}` (lattice or centroid)"
        )),
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("rate").required(true).args(["r", "r_range"])))]
#[command(group(clap::ArgGroup::new("key").required(true).args(["rs", "rs_range"])))]
pub struct CurveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Message rate R in bits.
    #[arg(long)]
    pub r: Option<f64>,
    /// Message-rate grid START:STOP:STEP in bits.
    #[arg(long)]
    pub r_range: Option<RateRange>,
    /// Single key rate Rs in bits.
    #[arg(long)]
    pub rs: Option<f64>,
    /// Key-rate grid START:STOP:STEP in bits.
    #[arg(long)]
    pub rs_range: Option<RateRange>,
    /// Comma-separated scheme ids.
    #[arg(
        long,
        value_delimiter = ',',
        value_parser = parse_with::<SchemeId>,
        default_value = "weak,jointly_gaussian,optimal_high_key,quantized_greedy"
    )]
    pub schemes: Vec<SchemeId>,
    /// Quantizer step for lp_quantized, in source units; σ0 when absent.
    #[arg(long)]
    pub t: Option<f64>,
    /// Eve's reconstruction rule for lp_quantized.
    #[arg(long, value_parser = parse_with::<ScoreMode>, default_value = "continuous")]
    pub mode: ScoreMode,
    /// Largest modulus swept by quantized_greedy.
    #[arg(long)]
    pub n_max: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub common: Common,
    /// sign_pad, full_encryption or no_key.
    #[arg(long, value_parser = parse_with::<SimScheme>)]
    pub scheme: SimScheme,
    /// weak, causal_source or causal_general.
    #[arg(long, value_parser = parse_with::<Scenario>, default_value = "weak")]
    pub scenario: Scenario,
    /// Message rate R in bits.
    #[arg(long)]
    pub r: f64,
    /// Key rate Rs in bits.
    #[arg(long, default_value_t = 0.0)]
    pub rs: f64,
    /// Quantizer step in source units; derived from the rate when absent.
    #[arg(long)]
    pub t: Option<f64>,
    /// Bob's reconstruction rule for an explicit --t.
    #[arg(long, value_parser = parse_reconstruction, default_value = "lattice", requires = "t")]
    pub reconstruction: Reconstruction,
    /// Seed for the source and key streams.
    #[arg(long)]
    pub seed: u64,
    /// Number of source symbols.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
}

/// Explicit alphabet `x1:p1,x2:p2,...`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmfArg {
    pub points: Vec<f64>,
    pub probs: Vec<f64>,
}

impl FromStr for PmfArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut points = Vec::new();
        let mut probs = Vec::new();
        for atom in s.split(',') {
            let (x, p) = atom
                .split_once(':')
                .ok_or_else(|| format!("expected POINT:PROB, got `{atom}`"))?;
            points.push(x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))?);
            probs.push(p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"))?);
        }
        Ok(Self { points, probs })
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("alphabet").required(true).args(["t", "pmf"])))]
pub struct LpArgs {
    #[command(flatten)]
    pub common: Common,
    /// Quantizer step in source units.
    #[arg(long)]
    pub t: Option<f64>,
    /// Explicit alphabet POINT:PROB,... in place of a quantizer.
    #[arg(long, allow_hyphen_values = true)]
    pub pmf: Option<PmfArg>,
    /// Message rate R in bits.
    #[arg(long)]
    pub r: f64,
    /// Key rate Rs in bits.
    #[arg(long)]
    pub rs: f64,
    /// continuous or alphabet_restricted.
    #[arg(long, value_parser = parse_with::<ScoreMode>, default_value = "continuous")]
    pub mode: ScoreMode,
}

#[derive(Debug, Args)]
pub struct QuantizerStatsArgs {
    #[command(flatten)]
    pub common: Common,
    /// Quantizer step in source units.
    #[arg(long)]
    pub t: f64,
    /// Moduli for H(Y | n mod N) and Eve's MMSE.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub n_mod: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

impl VerifyArgs {
    pub fn suites(&self) -> Result<Vec<Suite>, String> {
        if self.suite == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        parse_with::<Suite>(&self.suite).map(|s| vec![s])
    }
}

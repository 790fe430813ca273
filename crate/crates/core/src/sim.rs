//! Seeded Monte Carlo runs of the encoder/Bob/Eve game with per-symbol
//! quantize-then-pad schemes.
//!
//! Source symbols come from `ChaCha8Rng::seed_from_u64(seed)` through
//! `rand_distr::StandardNormal`; key material comes from the same seed on
//! ChaCha stream 1. Results are bit-identical for identical configurations.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::model::{GaussianSource, RatePair};
use crate::quantizer::{
    default_step_bracket, quantize_index, step_for_rate, BinTable, QuantizerSpec, Reconstruction,
};

/// Per-symbol encryption scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimScheme {
    /// Magnitude in clear, sign XOR one key bit.
    SignPad,
    /// Whole bin index one-time padded.
    FullEncryption,
    /// Bin index in clear.
    NoKey,
}

/// What Eve has seen before the current symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Her own past estimates.
    Weak,
    /// Past source symbols as well.
    CausalSource,
    /// Past source symbols and Bob's past reconstructions as well.
    CausalGeneral,
}

macro_rules! str_enum {
    ($ty:ident { $($var:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub fn as_str(self) -> &'static str {
                match self { $($ty::$var => $name),+ }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($ty::$var),)+
                    _ => Err(invalid(format!(concat!("unknown ", stringify!($ty), " `{}`"), s))),
                }
            }
        }
    };
}

str_enum!(SimScheme { SignPad => "sign_pad", FullEncryption => "full_encryption", NoKey => "no_key" });
str_enum!(Scenario { Weak => "weak", CausalSource => "causal_source", CausalGeneral => "causal_general" });

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scheme: SimScheme,
    pub scenario: Scenario,
    pub rates: RatePair,
    /// Quantizer to use. When `None` the step is chosen as the finest with
    /// `H(Y) ≤ R` (`≤ min(R, Rs)` for full encryption) and Bob uses lattice
    /// reconstruction.
    pub quantizer: Option<QuantizerSpec>,
    pub n_symbols: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub empirical_payoff: f64,
    /// Standard error of the per-letter payoff; NaN for a single symbol.
    pub std_error: f64,
    pub bob_mse: f64,
    pub eve_mse: f64,
    pub bob_std_error: f64,
    pub eve_std_error: f64,
    /// `H(Y)` of the quantizer.
    pub model_rate_bits: f64,
    /// Key bits per symbol the scheme consumes in the entropy model.
    pub model_key_bits: f64,
    pub t: f64,
    pub n_symbols: u64,
    pub analytic_payoff: f64,
    pub analytic_bob_mse: f64,
    pub analytic_eve_mse: f64,
}

/// Everything Eve has seen of the current symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observation {
    /// `|n|` and the padded sign bit.
    SignPad {
        magnitude: u64,
        padded_sign: bool,
    },
    /// `(n + key) mod L` over the `L` table slots.
    FullEncryption {
        padded_slot: u64,
    },
    NoKey {
        index: i64,
    },
}

/// Eve's causal side information. Only the slices her scenario grants are
/// populated.
#[derive(Debug, Clone, Copy, Default)]
pub struct History<'a> {
    pub xs: &'a [f64],
    pub ys: &'a [f64],
    pub zs: &'a [f64],
}

/// `E[X | observation]` under the scheme's known encoding.
///
/// All schemes are memoryless over an i.i.d. source, so the past carries no
/// information about the current symbol and `history` is not consulted.
pub fn eve_oracle_estimate(
    observation: Observation,
    _history: &History<'_>,
    table: &BinTable,
) -> f64 {
    match observation {
        Observation::SignPad { magnitude, .. } => {
            let m = magnitude as i64;
            if m == 0 {
                return table.centroid(0);
            }
            let (pp, pn) = (table.prob(m), table.prob(-m));
            (pp * table.centroid(m) + pn * table.centroid(-m)) / (pp + pn)
        }
        Observation::FullEncryption { .. } => table.source().mean(),
        Observation::NoKey { index } => table.centroid(index),
    }
}

/// Sample standard deviation over `√n`.
pub fn standard_error(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(invalid("standard error needs at least two samples"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let ss: f64 = samples.iter().map(|s| (s - mean).powi(2)).sum();
    Ok((ss / (n - 1.0)).sqrt() / n.sqrt())
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

fn resolve_quantizer(
    config: &SimConfig,
    source: &GaussianSource,
) -> Result<(BinTable, Reconstruction)> {
    let budget = match config.scheme {
        SimScheme::FullEncryption => config.rates.r().min(config.rates.rs()),
        _ => config.rates.r(),
    };
    let spec = match config.quantizer {
        Some(spec) => spec,
        None => {
            if budget <= 0.0 {
                return Err(config_error(format!(
                    "{} needs a positive rate budget to choose a quantizer step",
                    config.scheme
                )));
            }
            let template = QuantizerSpec::lattice(source.std_dev())?;
            let step = step_for_rate(
                source,
                budget,
                default_step_bracket(source, budget),
                &template,
            )?;
            template.with_t(step.t)?
        }
    };
    let table = BinTable::build(source, &spec)?;
    if table.entropy_y() > budget + 1e-9 {
        return Err(config_error(format!(
            "quantizer step {} needs H(Y) = {:.6} bits, above the {} budget of {budget} bits",
            spec.t(),
            table.entropy_y(),
            config.scheme
        )));
    }
    Ok((table, spec.reconstruction()))
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    fn add(&mut self, v: f64) {
        let t = self.s + v;
        self.c += if self.s.abs() >= v.abs() {
            (self.s - t) + v
        } else {
            (v - t) + self.s
        };
        self.s = t;
    }

    fn total(&self) -> f64 {
        self.s + self.c
    }
}

/// Plays `config.n_symbols` rounds of the game.
pub fn run_sim(config: &SimConfig, source: &GaussianSource) -> Result<SimResult> {
    if config.n_symbols == 0 {
        return Err(config_error("n_symbols must be at least 1"));
    }
    if config.scheme == SimScheme::SignPad && config.rates.rs() < 1.0 {
        return Err(config_error(format!(
            "sign_pad consumes one key bit per symbol but rs = {}",
            config.rates.rs()
        )));
    }
    if config.scheme == SimScheme::FullEncryption && config.rates.rs() <= 0.0 {
        return Err(config_error("full_encryption needs a positive key rate"));
    }
    let (table, rule) = resolve_quantizer(config, source)?;

    let n = config.n_symbols as usize;
    let slots = table.len() as u64;
    let mut src_rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut key_rng = ChaCha8Rng::seed_from_u64(config.seed);
    key_rng.set_stream(1);

    let keep = |s: Scenario| match s {
        Scenario::Weak => (false, false),
        Scenario::CausalSource => (true, false),
        Scenario::CausalGeneral => (true, true),
    };
    let (keep_x, keep_y) = keep(config.scenario);
    let mut xs = Vec::with_capacity(if keep_x { n } else { 0 });
    let mut ys = Vec::with_capacity(if keep_y { n } else { 0 });
    let mut zs = Vec::with_capacity(n);

    let mut payoffs = Vec::with_capacity(n);
    let mut bob_err = Vec::with_capacity(n);
    let mut eve_err = Vec::with_capacity(n);
    let (mut pay_sum, mut bob_sum, mut eve_sum) = (Sum::default(), Sum::default(), Sum::default());
    for _ in 0..n {
        let g: f64 = src_rng.sample(StandardNormal);
        let x = source.mean() + source.std_dev() * g;
        let k = table.bin_of(quantize_index(x, table.t(), source.mean()));
        let y = table.reconstruct(k, rule);
        let observation = match config.scheme {
            SimScheme::SignPad => {
                let key: bool = key_rng.random();
                Observation::SignPad {
                    magnitude: k.unsigned_abs(),
                    padded_sign: (k < 0) ^ key,
                }
            }
            SimScheme::FullEncryption => {
                let key = key_rng.random_range(0..slots);
                let slot = (k + table.k_max()) as u64;
                Observation::FullEncryption {
                    padded_slot: (slot + key) % slots,
                }
            }
            SimScheme::NoKey => Observation::NoKey { index: k },
        };
        let history = History {
            xs: &xs,
            ys: &ys,
            zs: &zs,
        };
        let z = eve_oracle_estimate(observation, &history, &table);

        let (be, ee) = ((y - x).powi(2), (z - x).powi(2));
        let pi = (ee - be) / source.variance();
        bob_sum.add(be);
        eve_sum.add(ee);
        pay_sum.add(pi);
        bob_err.push(be);
        eve_err.push(ee);
        payoffs.push(pi);
        if keep_x {
            xs.push(x);
        }
        if keep_y {
            ys.push(y);
        }
        zs.push(z);
    }

    let nf = n as f64;
    let se = |v: &[f64]| standard_error(v).unwrap_or(f64::NAN);
    let centroid_mse = table.bob_distortion(Reconstruction::Centroid);
    let analytic_bob_mse = table.bob_distortion(rule);
    let analytic_eve_mse = match config.scheme {
        SimScheme::SignPad => table.eve_mmse_given_abs()?,
        SimScheme::FullEncryption => source.variance(),
        SimScheme::NoKey => centroid_mse,
    };
    let model_key_bits = match config.scheme {
        SimScheme::SignPad => 1.0,
        SimScheme::FullEncryption => table.entropy_y(),
        SimScheme::NoKey => 0.0,
    };
    Ok(SimResult {
        empirical_payoff: pay_sum.total() / nf,
        std_error: se(&payoffs),
        bob_mse: bob_sum.total() / nf,
        eve_mse: eve_sum.total() / nf,
        bob_std_error: se(&bob_err),
        eve_std_error: se(&eve_err),
        model_rate_bits: table.entropy_y(),
        model_key_bits,
        t: table.t(),
        n_symbols: config.n_symbols,
        analytic_payoff: (analytic_eve_mse - analytic_bob_mse) / source.variance(),
        analytic_bob_mse,
        analytic_eve_mse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(scheme: SimScheme, scenario: Scenario, rs: f64, n: u64, seed: u64) -> SimConfig {
        SimConfig {
            scheme,
            scenario,
            rates: RatePair::new(2.7, rs).unwrap(),
            quantizer: None,
            n_symbols: n,
            seed,
        }
    }

    #[test]
    fn standard_error_examples() {
        assert_eq!(standard_error(&[3.0; 10]).unwrap(), 0.0);
        assert!((standard_error(&[0.0, 2.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(standard_error(&[1.0]).is_err());
    }

    #[test]
    fn standard_error_of_normal_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<f64> = (0..40_000)
            .map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let se = standard_error(&v).unwrap();
        assert!((se - 2.0 / 200.0).abs() < 2e-4, "{se}");
    }

    #[test]
    fn oracle_estimates() {
        let src = GaussianSource::new(1.5, 4.0).unwrap();
        let table = BinTable::build(&src, &QuantizerSpec::lattice(1.0).unwrap()).unwrap();
        let h = History::default();
        let eve = |o| eve_oracle_estimate(o, &h, &table);
        assert!(
            (eve(Observation::SignPad {
                magnitude: 2,
                padded_sign: true
            }) - 1.5)
                .abs()
                < 1e-12
        );
        assert_eq!(eve(Observation::FullEncryption { padded_slot: 4 }), 1.5);
        assert_eq!(eve(Observation::NoKey { index: -3 }), table.centroid(-3));
    }

    #[test]
    fn reproducible_and_bookkept() {
        let src = GaussianSource::standard();
        let c = config(SimScheme::SignPad, Scenario::CausalGeneral, 1.0, 5_000, 11);
        let a = run_sim(&c, &src).unwrap();
        assert_eq!(a, run_sim(&c, &src).unwrap());
        assert!((a.empirical_payoff - (a.eve_mse - a.bob_mse)).abs() < 1e-12);
        assert!(a.std_error > 0.0);
        assert_eq!(a.model_key_bits, 1.0);
    }

    #[test]
    fn scenario_does_not_change_results() {
        let src = GaussianSource::standard();
        let runs: Vec<_> = [
            Scenario::Weak,
            Scenario::CausalSource,
            Scenario::CausalGeneral,
        ]
        .into_iter()
        .map(|s| run_sim(&config(SimScheme::FullEncryption, s, 0.8, 2_000, 5), &src).unwrap())
        .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn config_validation() {
        let src = GaussianSource::standard();
        let bad = config(SimScheme::SignPad, Scenario::Weak, 0.5, 10, 1);
        assert!(matches!(run_sim(&bad, &src), Err(Error::InvalidConfig(_))));
        let mut zero = config(SimScheme::NoKey, Scenario::Weak, 0.0, 10, 1);
        zero.n_symbols = 0;
        assert!(matches!(run_sim(&zero, &src), Err(Error::InvalidConfig(_))));
        let mut fine = config(SimScheme::NoKey, Scenario::Weak, 0.0, 10, 1);
        fine.quantizer = Some(QuantizerSpec::lattice(0.1).unwrap());
        assert!(matches!(run_sim(&fine, &src), Err(Error::InvalidConfig(_))));
        let enc = config(SimScheme::FullEncryption, Scenario::Weak, 0.0, 10, 1);
        assert!(matches!(run_sim(&enc, &src), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn single_symbol_has_no_error_bar() {
        let r = run_sim(
            &config(SimScheme::NoKey, Scenario::Weak, 0.0, 1, 2),
            &GaussianSource::standard(),
        )
        .unwrap();
        assert!(r.std_error.is_nan());
    }

    #[test]
    fn names_round_trip() {
        for s in [
            SimScheme::SignPad,
            SimScheme::FullEncryption,
            SimScheme::NoKey,
        ] {
            assert_eq!(s.as_str().parse::<SimScheme>().unwrap(), s);
        }
        for s in [
            Scenario::Weak,
            Scenario::CausalSource,
            Scenario::CausalGeneral,
        ] {
            assert_eq!(s.to_string().parse::<Scenario>().unwrap(), s);
        }
        assert!("pad".parse::<SimScheme>().is_err());
    }
}

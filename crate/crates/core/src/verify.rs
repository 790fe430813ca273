//! Property suites with measured-versus-expected reports.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::model::{GaussianSource, RatePair};
use crate::quantizer::{BinTable, QuantizerSpec, Reconstruction};
use crate::schemes::{
    jointly_gaussian_payoff, sign_split_key_requirement, verify_general_awareness_construction,
    verify_jointly_gaussian_grid,
};
use crate::special::{binary_entropy_of_logit_bits, unit_gaussian_entropy_bits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Correlation grid search against `1 − 2^(−2 min(R, Rs))`.
    JointlyGaussianGrid,
    /// `H(Y) + log2(T/σ0) → h(X)` as `T → 0`.
    EntropyLimit,
    /// Rate and distortion of the fine quantizer at `T = √(2πe)·σ0·2^(−R)`.
    QuantizerBound,
    /// Key requirement of the sign/magnitude split.
    SignSplit,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::JointlyGaussianGrid,
        Suite::EntropyLimit,
        Suite::QuantizerBound,
        Suite::SignSplit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::JointlyGaussianGrid => "thm2_grid",
            Suite::EntropyLimit => "entropy_limit",
            Suite::QuantizerBound => "quantizer_bound",
            Suite::SignSplit => "sign_split",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Human-readable acceptance condition.
    pub expected: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {}: measured {:.10} expected {}",
            self.name, self.measured, self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(
    name: impl Into<String>,
    measured: f64,
    expected: impl Into<String>,
    passed: bool,
) -> Check {
    Check {
        name: name.into(),
        measured,
        expected: expected.into(),
        passed,
    }
}

pub fn run_suite(suite: Suite) -> Result<Report> {
    let checks = match suite {
        Suite::JointlyGaussianGrid => grid_checks()?,
        Suite::EntropyLimit => entropy_limit_checks()?,
        Suite::QuantizerBound => quantizer_bound_checks()?,
        Suite::SignSplit => sign_split_checks()?,
    };
    Ok(Report { suite, checks })
}

fn grid_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        for rs in [0.25, 0.5, 1.0, 2.0] {
            let rates = RatePair::new(r, rs)?;
            let opt = verify_jointly_gaussian_grid(rates, 0.005)?;
            let target = jointly_gaussian_payoff(rates).value();
            out.push(check(
                format!("g_max(R={r}, Rs={rs})"),
                opt.g_max,
                format!("{target:.10} ± 0.02"),
                (opt.g_max - target).abs() <= 0.02,
            ));
        }
    }
    Ok(out)
}

/// `|H(Y) + log2(T/σ0) − h(X)|` for the unit source.
pub fn cover_gap(t: f64) -> Result<f64> {
    let table = BinTable::build(&GaussianSource::standard(), &QuantizerSpec::lattice(t)?)?;
    Ok((table.entropy_y() + t.log2() - unit_gaussian_entropy_bits()).abs())
}

fn entropy_limit_checks() -> Result<Vec<Check>> {
    let gaps = [
        cover_gap(1.0 / 16.0)?,
        cover_gap(1.0 / 32.0)?,
        cover_gap(1.0 / 64.0)?,
    ];
    Ok(vec![
        check(
            "gap at T = σ0/16",
            gaps[0],
            "> gap at σ0/32",
            gaps[0] > gaps[1],
        ),
        check(
            "gap at T = σ0/32",
            gaps[1],
            "> gap at σ0/64",
            gaps[1] > gaps[2],
        ),
        check("gap at T = σ0/64", gaps[2], "≤ 0.01", gaps[2] <= 0.01),
    ])
}

fn quantizer_bound_checks() -> Result<Vec<Check>> {
    let c = std::f64::consts::PI * std::f64::consts::E / 2.0;
    let mut out = Vec::new();
    for r in [4.0f64, 6.0, 8.0] {
        let t = (4.0 * c).sqrt() * (-r).exp2();
        let table = BinTable::build(&GaussianSource::standard(), &QuantizerSpec::lattice(t)?)?;
        let h = table.entropy_y();
        let d = table.bob_distortion(Reconstruction::Lattice);
        let bound = c * (-2.0 * r).exp2();
        out.push(check(
            format!("H(Y) at R={r}"),
            h,
            format!("≤ {}", r + 0.01),
            h <= r + 0.01,
        ));
        out.push(check(
            format!("D lattice at R={r}"),
            d,
            format!("≤ {bound:.6e}"),
            d <= bound,
        ));
    }
    Ok(out)
}

/// Monte Carlo estimate of the sign-split key requirement and its standard
/// error.
pub fn sign_split_monte_carlo(r: f64, samples: usize, seed: u64) -> (f64, f64) {
    let resid = (-2.0 * r).exp2();
    let rho = (1.0 - resid).sqrt();
    let s = resid.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let x: f64 = rng.sample(StandardNormal);
        let y = rho * x + s * rng.sample::<f64, _>(StandardNormal);
        let h = binary_entropy_of_logit_bits(2.0 * rho * x * y.abs() / resid);
        sum += h;
        sq += h * h;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sq / n - mean * mean) * n / (n - 1.0);
    (1.0 - mean, (var.max(0.0) / n).sqrt())
}

fn sign_split_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut prev = 0.0;
    for r in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let v = sign_split_key_requirement(r)?;
        out.push(check(
            format!("I(X;V|U) at r={r}"),
            v,
            format!("in [{prev:.6}, 1)"),
            (prev..1.0).contains(&v),
        ));
        prev = v;
    }
    let small = sign_split_key_requirement(1e-3)?;
    out.push(check("I(X;V|U) at r=0.001", small, "< 0.01", small < 0.01));
    let high = sign_split_key_requirement(10.0)?;
    out.push(check(
        "I(X;V|U) at r=10",
        high,
        "in [0.99, 1)",
        (0.99..1.0).contains(&high),
    ));
    let quad = sign_split_key_requirement(1.0)?;
    let (mc, se) = sign_split_monte_carlo(1.0, 2_000_000, 1);
    out.push(check(
        "quadrature vs Monte Carlo at r=1",
        quad,
        format!("{mc:.6} ± {:.2e} (3 s.e.)", 3.0 * se),
        (quad - mc).abs() <= 3.0 * se,
    ));
    let ga = verify_general_awareness_construction(2.7)?;
    out.push(check(
        "I(X,Y;V|U) at r=2.7",
        ga.i_xyv_given_u,
        "1 ± 1e-9 with Y = f(U, V)",
        (ga.i_xyv_given_u - 1.0).abs() < 1e-9 && ga.markov_ok,
    ));
    Ok(out)
}

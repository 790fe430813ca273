//! Source model, payoff function and Gaussian rate-distortion closed forms.
//!
//! All rates are in bits per source symbol and all entropies are base 2.

use crate::error::{invalid, Result};
use crate::special::{std_normal_mass, std_normal_pdf, unit_gaussian_entropy_bits};

/// An i.i.d. Gaussian source N(μ0, σ0²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSource {
    mu0: f64,
    sigma0_sq: f64,
}

impl GaussianSource {
    pub fn new(mu0: f64, sigma0_sq: f64) -> Result<Self> {
        if !mu0.is_finite() {
            return Err(invalid(format!("source mean must be finite, got {mu0}")));
        }
        if !(sigma0_sq > 0.0 && sigma0_sq.is_finite()) {
            return Err(invalid(format!(
                "source variance must be positive and finite, got {sigma0_sq}"
            )));
        }
        Ok(Self { mu0, sigma0_sq })
    }

    /// N(0, 1).
    pub fn standard() -> Self {
        Self {
            mu0: 0.0,
            sigma0_sq: 1.0,
        }
    }

    pub fn mean(&self) -> f64 {
        self.mu0
    }

    pub fn variance(&self) -> f64 {
        self.sigma0_sq
    }

    pub fn std_dev(&self) -> f64 {
        self.sigma0_sq.sqrt()
    }

    /// Per-letter payoff `((z − x)² − (y − x)²) / σ0²`: positive when Eve's
    /// reconstruction `z` is further from `x` than Bob's `y`.
    pub fn payoff(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(invalid(format!(
                "payoff arguments must be finite, got ({x}, {y}, {z})"
            )));
        }
        Ok(((z - x).powi(2) - (y - x).powi(2)) / self.sigma0_sq)
    }

    /// Arithmetic mean of the per-letter payoffs.
    pub fn sequence_payoff(&self, xs: &[f64], ys: &[f64], zs: &[f64]) -> Result<f64> {
        if xs.is_empty() {
            return Err(invalid("payoff of an empty sequence"));
        }
        if xs.len() != ys.len() || xs.len() != zs.len() {
            return Err(invalid(format!(
                "sequence lengths differ: {}, {}, {}",
                xs.len(),
                ys.len(),
                zs.len()
            )));
        }
        let mut total = 0.0;
        for ((&x, &y), &z) in xs.iter().zip(ys).zip(zs) {
            total += self.payoff(x, y, z)?;
        }
        Ok(total / xs.len() as f64)
    }

    /// Distortion-rate function `σ0² · 2^(−2r)`.
    pub fn distortion_rate(&self, r: f64) -> Result<f64> {
        check_rate(r, "rate")?;
        Ok(self.sigma0_sq * (-2.0 * r).exp2())
    }

    /// `½ log2(2πe σ0²)`.
    pub fn differential_entropy_bits(&self) -> f64 {
        unit_gaussian_entropy_bits() + 0.5 * self.sigma0_sq.log2()
    }

    /// Mass, conditional mean and conditional second moment of the source
    /// restricted to `(a, b]`. Either endpoint may be infinite.
    ///
    /// Masses below 1e−300 are reported as zero with the moments pinned to
    /// whichever endpoint is nearer the mean.
    pub fn truncated_moments(&self, a: f64, b: f64) -> Result<TruncatedMoments> {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(invalid(format!(
                "truncation interval must satisfy a < b, got ({a}, {b})"
            )));
        }
        let sigma = self.std_dev();
        let std = StdTruncation::new((a - self.mu0) / sigma, (b - self.mu0) / sigma);
        if std.mass < 1e-300 {
            let near = if (a - self.mu0).abs() <= (b - self.mu0).abs() {
                a
            } else {
                b
            };
            return Ok(TruncatedMoments {
                mass: 0.0,
                mean: near,
                second_moment: near * near,
            });
        }
        let mean = self.mu0 + sigma * std.mean;
        let second_moment = self.mu0 * self.mu0
            + 2.0 * self.mu0 * sigma * std.mean
            + self.sigma0_sq * std.second_moment;
        Ok(TruncatedMoments {
            mass: std.mass,
            mean,
            second_moment,
        })
    }
}

/// Moments of a standard normal truncated to `(alpha, beta]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StdTruncation {
    pub mass: f64,
    pub mean: f64,
    pub second_moment: f64,
}

impl StdTruncation {
    pub(crate) fn new(alpha: f64, beta: f64) -> Self {
        let mass = std_normal_mass(alpha, beta);
        if mass < 1e-300 {
            return Self {
                mass: 0.0,
                mean: 0.0,
                second_moment: 0.0,
            };
        }
        let (pa, pb) = (std_normal_pdf(alpha), std_normal_pdf(beta));
        // x·φ(x) vanishes at ±∞.
        let xpa = if alpha.is_finite() { alpha * pa } else { 0.0 };
        let xpb = if beta.is_finite() { beta * pb } else { 0.0 };
        let mean = (pa - pb) / mass;
        let second_moment = (mass + xpa - xpb) / mass;
        Self {
            mass,
            mean,
            second_moment: second_moment.max(mean * mean),
        }
    }

    pub(crate) fn variance(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0)
    }
}

/// Budgets `(R, Rs)` in bits per source symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    r: f64,
    rs: f64,
}

impl RatePair {
    pub fn new(r: f64, rs: f64) -> Result<Self> {
        check_rate(r, "message rate R")?;
        check_rate(rs, "key rate Rs")?;
        Ok(Self { r, rs })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn rs(&self) -> f64 {
        self.rs
    }
}

pub(crate) fn check_rate(r: f64, what: &str) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid(format!(
            "{what} must be a nonnegative finite number of bits, got {r}"
        )));
    }
    Ok(())
}

/// A normalized payoff Π (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PayoffValue(f64);

impl PayoffValue {
    pub(crate) fn new(pi: f64) -> Self {
        debug_assert!(pi.is_nan() || pi <= 1.0 + 1e-9, "payoff {pi} exceeds 1");
        Self(pi)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<PayoffValue> for f64 {
    fn from(p: PayoffValue) -> f64 {
        p.0
    }
}

/// Mass and conditional moments of the source on an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedMoments {
    pub mass: f64,
    pub mean: f64,
    pub second_moment: f64,
}

impl TruncatedMoments {
    pub fn variance(&self) -> f64 {
        (self.second_moment - self.mean * self.mean).max(0.0)
    }
}

//! Standard normal density and distribution function, plus the binary
//! entropy helpers used throughout.
//!
//! The distribution function is evaluated with two expansions that avoid
//! cancellation in the regimes where each is used:
//!
//! * `|x| < 3`: the all-positive series
//!   `Φ(x) = ½ + φ(x) · Σ x^(2n+1) / (1·3·5···(2n+1))`;
//! * `|x| ≥ 3`: the Laplace continued fraction for the Mills ratio,
//!   `Φ(−x) = φ(x) / (x + 1/(x + 2/(x + 3/(x + …))))`, evaluated with the
//!   modified Lentz algorithm.
//!
//! Together these hold the relative error of the cdf below 1e−13 on
//! |x| ≤ 8, and [`std_normal_sf`] keeps full relative accuracy deep into
//! the upper tail.

use std::f64::consts::{LN_2, PI};

const SERIES_LIMIT: f64 = 3.0;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density φ(x).
pub fn std_normal_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal distribution function Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= SERIES_LIMIT {
        1.0 - lower_tail(x)
    } else if x <= -SERIES_LIMIT {
        lower_tail(-x)
    } else {
        0.5 + std_normal_pdf(x) * positive_series(x)
    }
}

/// Survival function 1 − Φ(x), accurate in relative terms for large x.
pub fn std_normal_sf(x: f64) -> f64 {
    std_normal_cdf(-x)
}

/// Standard normal `(pdf, cdf)` at `x`.
pub fn std_normal(x: f64) -> (f64, f64) {
    (std_normal_pdf(x), std_normal_cdf(x))
}

/// Probability mass of the standard normal on `(a, b]`.
///
/// Computed from whichever tail keeps the two terms small so that narrow
/// intervals far from the origin keep their relative precision.
pub fn std_normal_mass(a: f64, b: f64) -> f64 {
    if a >= 0.0 {
        std_normal_sf(a) - std_normal_sf(b)
    } else if b <= 0.0 {
        std_normal_cdf(b) - std_normal_cdf(a)
    } else {
        1.0 - std_normal_cdf(a) - std_normal_sf(b)
    }
}

fn positive_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= x2 / f64::from(2 * n + 1);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || n > 200 {
            break;
        }
    }
    sum
}

/// Φ(−x) for x ≥ 3 via the Mills-ratio continued fraction.
fn lower_tail(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let pdf = std_normal_pdf(x);
    if pdf == 0.0 {
        return 0.0;
    }
    // x + 1/(x + 2/(x + 3/(x + ...)))
    let tiny = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..5000u32 {
        let a = f64::from(n);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    pdf / f
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
pub fn plogp_bits(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Binary entropy in bits.
pub fn binary_entropy_bits(p: f64) -> f64 {
    plogp_bits(p) + plogp_bits(1.0 - p)
}

/// Binary entropy of `logistic(a) = 1/(1 + e^(−a))`, in bits, evaluated
/// without forming the probability so that large |a| stays accurate.
pub fn binary_entropy_of_logit_bits(a: f64) -> f64 {
    let a = a.abs();
    let e = (-a).exp();
    ((e).ln_1p() + a * e / (1.0 + e)) / LN_2
}

/// ½·log2(2πe), the differential entropy of a unit-variance Gaussian in bits.
pub fn unit_gaussian_entropy_bits() -> f64 {
    0.5 * (2.0 * PI * std::f64::consts::E).log2()
}

//! Sign/magnitude split of a jointly Gaussian reconstruction.
//!
//! `X` and `Y` are zero-mean, unit-variance and jointly Gaussian with
//! `ρ² = 1 − 2^(−2r)`, so that `I(X;Y) = r`. Eve learns `U = |Y|`; the key
//! protects `V = sgn(Y)`. Given `U = u` the two signs are equally likely, so
//! `H(V|U) = 1` and
//!
//! ```text
//! I(X;V|U) = 1 − E[H_b(P(V = +1 | X, U))],
//! P(V = +1 | X = x, U = u) = logistic(2ρxu / (1 − ρ²)).
//! ```
//!
//! The expectation is a two-dimensional integral whose mass concentrates
//! in a region of width `√(1 − ρ²)` around the origin as `r` grows, so it
//! is evaluated by nested adaptive Gauss–Kronrod with breakpoints placed
//! on that scale.

use std::f64::consts::PI;

use crate::error::Result;
use crate::model::check_rate;
use crate::quadrature::integrate;
use crate::special::binary_entropy_of_logit_bits;

const DOMAIN: f64 = 8.0;

/// `I(X; V | U)` in bits for the sign/magnitude construction at rate `r`.
pub fn sign_split_key_requirement(r: f64) -> Result<f64> {
    check_rate(r, "rate")?;
    let resid = (-2.0 * r).exp2(); // 1 − ρ²
    if resid >= 1.0 {
        return Ok(0.0);
    }
    if resid < 1e-200 {
        return Ok(1.0 - f64::EPSILON);
    }
    let rho = (1.0 - resid).sqrt();
    let s = resid.sqrt();
    let logit_scale = 2.0 * rho / resid;
    let norm = 1.0 / (PI * s); // 2 · 1/(2π s)

    // Joint density of (|X|, |Y|) at (x, y), both nonnegative.
    let folded_density = move |x: f64, y: f64| {
        let near = (y - rho * x) / s;
        let far = (y + rho * x) / s;
        norm * ((-0.5 * (x * x + near * near)).exp() + (-0.5 * (x * x + far * far)).exp())
    };

    let scales = scale_breakpoints(s);
    let outer = |x: f64| {
        let mut pts = scales.clone();
        for m in [-8.0, -2.0, 0.0, 2.0, 8.0] {
            pts.push(rho * x + m * s);
        }
        if x > 0.0 {
            let y_logit = 1.0 / (logit_scale * x);
            pts.extend([y_logit, 8.0 * y_logit, 32.0 * y_logit]);
        }
        let pts = clean(pts);
        integrate(
            |y| folded_density(x, y) * binary_entropy_of_logit_bits(logit_scale * x * y),
            &pts,
            1e-13,
            1e-11,
            4000,
        )
        .value
    };
    let expected_entropy = integrate(outer, &clean(scales.clone()), 1e-12, 1e-10, 4000).value;
    Ok((1.0 - expected_entropy).clamp(0.0, 1.0 - f64::EPSILON))
}

fn scale_breakpoints(s: f64) -> Vec<f64> {
    let mut pts = vec![0.0, DOMAIN];
    let mut p = s / 16.0;
    while p < DOMAIN {
        pts.push(p);
        p *= 2.0;
    }
    pts
}

fn clean(mut pts: Vec<f64>) -> Vec<f64> {
    pts.retain(|p| (0.0..=DOMAIN).contains(p));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Constraint check of the sign/magnitude construction under causal
/// general awareness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralAwarenessCheck {
    /// `I(X, Y; V | U)` in bits.
    pub i_xyv_given_u: f64,
    /// `I(X; U, V) = I(X; Y)` in bits; the message rate constraint.
    pub i_x_uv: f64,
    /// `Y` is a function of `(U, V)`, so `p(y | u, v, x) = p(y | u, v)`.
    pub markov_ok: bool,
    /// `r = 0`: `Y ≡ 0` and `V` is constant.
    pub degenerate: bool,
}

/// Evaluates the general-awareness constraints for the sign/magnitude
/// construction at rate `r`.
///
/// `V = sgn(Y)` is a function of `Y`, so `H(V | X, Y, U) = 0` and
/// `I(X,Y;V|U) = H(V|U)`. The posterior of `V` given `U = u` is computed from
/// the density of `Y` on a grid of magnitudes and its entropy averaged.
pub fn verify_general_awareness_construction(r: f64) -> Result<GeneralAwarenessCheck> {
    check_rate(r, "rate")?;
    let rho2 = -(-2.0 * r).exp_m1();
    if rho2 == 0.0 {
        return Ok(GeneralAwarenessCheck {
            i_xyv_given_u: 0.0,
            i_x_uv: 0.0,
            markov_ok: true,
            degenerate: true,
        });
    }
    let sd_y = rho2.sqrt();
    let density = |y: f64| (-0.5 * (y / sd_y).powi(2)).exp();
    let weight = |u: f64| 2.0 * density(u) / (sd_y * (2.0 * PI).sqrt());
    let panels = [0.0, 2.0 * sd_y, 8.0 * sd_y];
    let mass = integrate(weight, &panels, 1e-15, 1e-14, 200).value;
    let h_v_given_u = integrate(
        |u| {
            let (pos, neg) = (density(u), density(-u));
            weight(u) * crate::special::binary_entropy_bits(pos / (pos + neg))
        },
        &panels,
        1e-15,
        1e-14,
        200,
    )
    .value
        / mass;
    // Exact reconstruction Y = V·U on a grid of reconstruction values.
    let markov_ok = (-400..=400).map(|i| i as f64 * sd_y / 50.0).all(|y: f64| {
        let (u, v) = (y.abs(), y.signum());
        y == 0.0 || v * u == y
    });
    Ok(GeneralAwarenessCheck {
        i_xyv_given_u: h_v_given_u,
        i_x_uv: r,
        markov_ok,
        degenerate: false,
    })
}

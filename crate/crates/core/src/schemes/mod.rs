//! Secrecy rate-payoff curves: closed forms, the jointly-Gaussian grid
//! verifier, the sign/magnitude construction, the greedy quantized scheme
//! and a brute-force evaluator for finite-alphabet strategies.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{check_rate, PayoffValue, RatePair};

mod finite;
mod greedy;
mod grid;
mod sign_split;

pub use finite::{evaluate_finite_strategy, FiniteEvaluation, FiniteJoint};
pub use greedy::{greedy_quantized_scheme, GreedySearch};
pub use grid::{
    jointly_gaussian_constraints, verify_jointly_gaussian_grid, CorrelationTriple, GridOptimum,
};
pub use sign_split::{
    sign_split_key_requirement, verify_general_awareness_construction, GeneralAwarenessCheck,
};

/// Which construction produced a payoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    Weak,
    JointlyGaussian,
    OptimalHighKey,
    QuantizedGreedy,
    LpQuantized,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::Weak,
        SchemeId::JointlyGaussian,
        SchemeId::OptimalHighKey,
        SchemeId::QuantizedGreedy,
        SchemeId::LpQuantized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::Weak => "weak",
            SchemeId::JointlyGaussian => "jointly_gaussian",
            SchemeId::OptimalHighKey => "optimal_high_key",
            SchemeId::QuantizedGreedy => "quantized_greedy",
            SchemeId::LpQuantized => "lp_quantized",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme `{s}`")))
    }
}

/// Details recorded alongside an evaluated payoff.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PayoffMeta {
    /// Quantizer step, source units.
    pub t: Option<f64>,
    /// Modulus of `U = n mod N`.
    pub n_mod: Option<u64>,
    pub feasible: bool,
    /// `R − H(Y)` in bits.
    pub rate_slack_bits: Option<f64>,
    /// `Rs − H(Y|U)` in bits.
    pub key_slack_bits: Option<f64>,
    pub notes: Vec<String>,
}

/// A payoff evaluated for one scheme at one rate pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffPoint {
    pub rates: RatePair,
    pub scheme: SchemeId,
    pub payoff: PayoffValue,
    pub meta: PayoffMeta,
}

/// `1 − 2^(−2r)`: Bob at the distortion-rate limit, Eve at the prior.
pub fn perfect_secrecy_payoff(r: f64) -> f64 {
    exp2_payoff(r)
}

/// Weak eavesdropper (no causal side information): any positive key rate
/// achieves the perfect-secrecy payoff `1 − 2^(−2R)`.
pub fn weak_eavesdropper_payoff(rates: RatePair) -> Result<PayoffValue> {
    if rates.rs() <= 0.0 {
        return Err(Error::InfeasibleKeyRate {
            rs: rates.rs(),
            reason: "a weak eavesdropper still requires a strictly positive key rate",
        });
    }
    Ok(PayoffValue::new(exp2_payoff(rates.r())))
}

/// Best payoff over jointly Gaussian `(X, Y, U)`: `1 − 2^(−2 min(R, Rs))`.
pub fn jointly_gaussian_payoff(rates: RatePair) -> PayoffValue {
    PayoffValue::new(exp2_payoff(rates.r().min(rates.rs())))
}

/// Optimal payoff with causal source (or general) awareness once
/// `Rs ≥ 1` bit: `1 − 2^(−2R)`, independent of the key rate.
pub fn optimal_high_key_payoff(rates: RatePair) -> Result<PayoffValue> {
    if rates.rs() < 1.0 {
        return Err(Error::OutOfRegime { rs: rates.rs() });
    }
    Ok(PayoffValue::new(exp2_payoff(rates.r())))
}

/// Large-rate lower bound of the symmetric quantizer with a one-bit key,
/// `1 − (πe/2)·2^(−2r)`. Negative for small `r`; returned as is.
pub fn asymptotic_quantization_bound(r: f64) -> Result<PayoffValue> {
    check_rate(r, "rate")?;
    let c = std::f64::consts::PI * std::f64::consts::E / 2.0;
    Ok(PayoffValue::new(1.0 - c * (-2.0 * r).exp2()))
}

fn exp2_payoff(r: f64) -> f64 {
    1.0 - (-2.0 * r).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rates(r: f64, rs: f64) -> RatePair {
        RatePair::new(r, rs).unwrap()
    }

    #[test]
    fn weak_examples() {
        assert_eq!(
            weak_eavesdropper_payoff(rates(0.0, 0.1)).unwrap().value(),
            0.0
        );
        let p = weak_eavesdropper_payoff(rates(2.7, 0.01)).unwrap().value();
        assert!((p - (1.0 - (-5.4f64).exp2())).abs() < 1e-15);
        assert!(matches!(
            weak_eavesdropper_payoff(rates(1.0, 0.0)),
            Err(Error::InfeasibleKeyRate { .. })
        ));
    }

    #[test]
    fn jointly_gaussian_examples() {
        assert!((jointly_gaussian_payoff(rates(2.7, 0.5)).value() - 0.5).abs() < 1e-15);
        assert_eq!(jointly_gaussian_payoff(rates(3.0, 0.0)).value(), 0.0);
        assert!((jointly_gaussian_payoff(rates(1.0, 5.0)).value() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn optimal_high_key_examples() {
        let p = optimal_high_key_payoff(rates(2.7, 1.0)).unwrap().value();
        assert!((p - 0.976_316_929).abs() < 1e-9);
        assert_eq!(
            optimal_high_key_payoff(rates(0.0, 1.0)).unwrap().value(),
            0.0
        );
        assert!(matches!(
            optimal_high_key_payoff(rates(1.0, 0.5)),
            Err(Error::OutOfRegime { .. })
        ));
    }

    #[test]
    fn asymptotic_bound_examples() {
        let c = std::f64::consts::PI * std::f64::consts::E / 2.0;
        assert!((asymptotic_quantization_bound(0.0).unwrap().value() + 3.269_867_2).abs() < 1e-7);
        assert!(
            (asymptotic_quantization_bound(4.0).unwrap().value() - (1.0 - c / 256.0)).abs() < 1e-15
        );
        assert!(asymptotic_quantization_bound(60.0).unwrap().value() > 1.0 - 1e-15);
    }

    #[test]
    fn scheme_ids_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.as_str().parse::<SchemeId>().unwrap(), id);
        }
        assert!("gaussian".parse::<SchemeId>().is_err());
    }

    proptest! {
        #[test]
        fn weak_dominates_jointly_gaussian(r in 0.0..10.0f64, rs in 1e-6..10.0f64) {
            let p = rates(r, rs);
            let weak = weak_eavesdropper_payoff(p).unwrap().value();
            let jg = jointly_gaussian_payoff(p).value();
            prop_assert!(weak >= jg);
            if rs >= r {
                prop_assert_eq!(weak, jg);
            } else {
                prop_assert!(weak > jg || r - rs < 1e-12);
            }
        }

        #[test]
        fn high_key_payoff_ignores_key(r in 0.0..10.0f64, rs1 in 1.0..10.0f64, rs2 in 1.0..10.0f64) {
            let a = optimal_high_key_payoff(rates(r, rs1)).unwrap();
            let b = optimal_high_key_payoff(rates(r, rs2)).unwrap();
            prop_assert_eq!(a, b);
            prop_assert_eq!(a, weak_eavesdropper_payoff(rates(r, rs1)).unwrap());
        }

        #[test]
        fn no_closed_form_beats_perfect_secrecy(r in 0.0..10.0f64, rs in 0.0..10.0f64) {
            let bound = 1.0 - (-2.0 * r).exp2() + 1e-9;
            prop_assert!(jointly_gaussian_payoff(rates(r, rs)).value() <= bound);
            prop_assert!(asymptotic_quantization_bound(r).unwrap().value() <= bound);
        }
    }
}

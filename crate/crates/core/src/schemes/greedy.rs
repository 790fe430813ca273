use crate::error::{invalid, Result};
use crate::model::{GaussianSource, PayoffValue, RatePair};
use crate::quantizer::{
    default_step_bracket, step_for_rate, BinTable, QuantizerSpec, Reconstruction,
};

use super::{PayoffMeta, PayoffPoint, SchemeId};

/// Search settings for [`greedy_quantized_scheme`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedySearch {
    /// Step bracket in source units; derived from the rate when `None`.
    pub t_bracket: Option<(f64, f64)>,
    /// Largest modulus tried; `2·k_max + 1` (where `U` reveals `Y`) when
    /// `None`.
    pub n_max: Option<u64>,
    /// Bob's reconstruction rule.
    pub reconstruction: Reconstruction,
}

impl Default for GreedySearch {
    fn default() -> Self {
        Self {
            t_bracket: None,
            n_max: None,
            reconstruction: Reconstruction::Lattice,
        }
    }
}

/// Quantize with `Y = nT` and disclose `U = n mod N`.
///
/// First the step is fixed as the finest `T` with `H(Y) ≤ R`. Then every
/// modulus `N = 1..=n_max` with `H(Y|U) ≤ Rs` is scored by
/// `(E[(X − E[X|U])²] − E[(Y − X)²]) / σ0²` and the best one is kept
/// (smallest `N` on ties). If no modulus meets the key budget the one with
/// the smallest violation is returned with `meta.feasible = false`.
pub fn greedy_quantized_scheme(
    source: &GaussianSource,
    rates: RatePair,
    search: &GreedySearch,
) -> Result<PayoffPoint> {
    if rates.r() <= 0.0 {
        return Err(invalid(
            "the greedy quantized scheme needs a positive message rate",
        ));
    }
    let template = QuantizerSpec::new(source.std_dev(), 1, search.reconstruction)?;
    let bracket = search
        .t_bracket
        .unwrap_or_else(|| default_step_bracket(source, rates.r()));
    let step = step_for_rate(source, rates.r(), bracket, &template)?;
    let table = BinTable::build(source, &template.with_t(step.t)?)?;
    let bob = table.bob_distortion(search.reconstruction);
    let n_max = search.n_max.unwrap_or(2 * table.k_max() as u64 + 1);
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }

    struct Candidate {
        n_mod: u64,
        payoff: f64,
        key_bits: f64,
    }
    let mut best: Option<Candidate> = None;
    let mut least_violation: Option<Candidate> = None;
    for n_mod in 1..=n_max {
        let key_bits = table.cond_entropy_given_mod(n_mod)?;
        let payoff = (table.eve_mmse_given_mod(n_mod)? - bob) / source.variance();
        let cand = Candidate {
            n_mod,
            payoff,
            key_bits,
        };
        if key_bits <= rates.rs() {
            if best.as_ref().is_none_or(|b| payoff > b.payoff) {
                best = Some(cand);
            }
        } else if least_violation
            .as_ref()
            .is_none_or(|b| key_bits < b.key_bits)
        {
            least_violation = Some(cand);
        }
    }

    let feasible = best.is_some();
    let chosen = best.or(least_violation).expect("n_max >= 1");
    let mut notes = Vec::new();
    if !step.bisected {
        notes.push("H(Y) not monotone on bracket; step from grid scan".to_owned());
    }
    if !feasible {
        notes.push(format!("no N <= {n_max} meets H(Y|U) <= Rs"));
    }
    Ok(PayoffPoint {
        rates,
        scheme: SchemeId::QuantizedGreedy,
        payoff: PayoffValue::new(chosen.payoff),
        meta: PayoffMeta {
            t: Some(step.t),
            n_mod: Some(chosen.n_mod),
            feasible,
            rate_slack_bits: Some(rates.r() - step.entropy_bits),
            key_slack_bits: Some(rates.rs() - chosen.key_bits),
            notes,
        },
    })
}

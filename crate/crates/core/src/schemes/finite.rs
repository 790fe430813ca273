use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::error::{invalid, Result};
use crate::model::{GaussianSource, PayoffValue};
use crate::special::plogp_bits;

/// A joint pmf `p(x, y, u)` on finite supports, stored sparsely as
/// `(x index, y index, u index, probability)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteJoint {
    xs: Vec<f64>,
    ys: Vec<f64>,
    us: Vec<f64>,
    atoms: Vec<(usize, usize, usize, f64)>,
}

impl FiniteJoint {
    /// Repeated index triples are merged.
    pub fn new(
        xs: Vec<f64>,
        ys: Vec<f64>,
        us: Vec<f64>,
        atoms: impl IntoIterator<Item = (usize, usize, usize, f64)>,
    ) -> Result<Self> {
        let mut merged = BTreeMap::<(usize, usize, usize), f64>::new();
        for (ix, iy, iu, p) in atoms {
            if ix >= xs.len() || iy >= ys.len() || iu >= us.len() {
                return Err(invalid(format!(
                    "atom ({ix}, {iy}, {iu}) is outside the supports"
                )));
            }
            if !(p >= 0.0 && p.is_finite()) {
                return Err(invalid(format!("pmf value {p} is not a probability")));
            }
            *merged.entry((ix, iy, iu)).or_default() += p;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("pmf sums to {total}, not 1")));
        }
        let atoms = merged
            .into_iter()
            .map(|((a, b, c), p)| (a, b, c, p))
            .collect();
        Ok(Self { xs, ys, us, atoms })
    }

    pub fn atoms(&self) -> &[(usize, usize, usize, f64)] {
        &self.atoms
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn us(&self) -> &[f64] {
        &self.us
    }
}

/// Constraint quantities and payoff of a finite strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteEvaluation {
    /// Key rate required, `I(X; Y | U)`.
    pub i_xy_given_u: f64,
    /// Message rate required, `I(X; U, Y)`.
    pub i_x_uy: f64,
    /// `Σ_u p(u) Var(X | U = u)`.
    pub eve_mmse: f64,
    /// `E[(Y − X)²]`.
    pub bob_mse: f64,
    pub payoff: PayoffValue,
}

fn entropy_of<K: Hash + Eq>(joint: &FiniteJoint, key: impl Fn(usize, usize, usize) -> K) -> f64 {
    let mut m = HashMap::<K, f64>::new();
    for &(x, y, u, p) in joint.atoms() {
        *m.entry(key(x, y, u)).or_default() += p;
    }
    m.into_values().map(plogp_bits).sum()
}

/// Brute-force evaluation of a finite strategy with Eve's best response
/// `z(u) = E[X | U = u]`; payoff normalized by the source variance.
pub fn evaluate_finite_strategy(
    joint: &FiniteJoint,
    source: &GaussianSource,
) -> Result<FiniteEvaluation> {
    let h_u = entropy_of(joint, |_, _, u| u);
    let h_x = entropy_of(joint, |x, _, _| x);
    let h_xu = entropy_of(joint, |x, _, u| (x, u));
    let h_yu = entropy_of(joint, |_, y, u| (y, u));
    let h_xyu = entropy_of(joint, |x, y, u| (x, y, u));
    let i_xy_given_u = (h_xu + h_yu - h_xyu - h_u).max(0.0);
    let i_x_uy = (h_x + h_yu - h_xyu).max(0.0);

    let mut by_u = HashMap::<usize, (f64, f64)>::new();
    let mut bob_mse = 0.0;
    for &(ix, iy, iu, p) in joint.atoms() {
        let x = joint.xs[ix];
        let e = by_u.entry(iu).or_default();
        e.0 += p;
        e.1 += p * x;
        bob_mse += p * (joint.ys[iy] - x).powi(2);
    }
    let eve_mmse: f64 = joint
        .atoms()
        .iter()
        .map(|&(ix, _, iu, p)| {
            let (pu, first) = by_u[&iu];
            p * (joint.xs[ix] - first / pu).powi(2)
        })
        .sum();
    Ok(FiniteEvaluation {
        i_xy_given_u,
        i_x_uy,
        eve_mmse,
        bob_mse,
        payoff: PayoffValue::new((eve_mmse - bob_mse) / source.variance()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn three_point_x() -> (Vec<f64>, Vec<f64>) {
        (vec![-1.2, 0.0, 1.2], vec![0.3, 0.4, 0.3])
    }

    #[test]
    fn independent_u_keeps_eve_at_prior() {
        let (xs, px) = three_point_x();
        let mean: f64 = xs.iter().zip(&px).map(|(x, p)| x * p).sum();
        let var: f64 = xs
            .iter()
            .zip(&px)
            .map(|(x, p)| p * (x - mean).powi(2))
            .sum();
        // Y = X, U uniform on two labels independent of both.
        let pr = &px;
        let atoms = (0..3).flat_map(|i| (0..2).map(move |u| (i, i, u, pr[i] * 0.5)));
        let j = FiniteJoint::new(xs.clone(), xs.clone(), vec![0.0, 1.0], atoms).unwrap();
        let ev = evaluate_finite_strategy(&j, &GaussianSource::standard()).unwrap();
        let h: f64 = px.iter().copied().map(plogp_bits).sum();
        assert!((ev.i_xy_given_u - h).abs() < 1e-12);
        assert!((ev.eve_mmse - var).abs() < 1e-12);
        assert!(ev.bob_mse == 0.0);
    }

    #[test]
    fn copy_with_constant_u() {
        let (xs, px) = three_point_x();
        let var: f64 = xs.iter().zip(&px).map(|(x, p)| p * x * x).sum();
        let atoms = (0..3).map(|i| (i, i, 0, px[i]));
        let j = FiniteJoint::new(xs.clone(), xs, vec![0.0], atoms).unwrap();
        let src = GaussianSource::new(0.0, 2.0).unwrap();
        let ev = evaluate_finite_strategy(&j, &src).unwrap();
        let h: f64 = px.iter().copied().map(plogp_bits).sum();
        assert!((ev.payoff.value() - var / 2.0).abs() < 1e-12);
        assert!((ev.i_x_uy - h).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_pmf() {
        let xs = vec![0.0];
        assert!(FiniteJoint::new(xs.clone(), xs.clone(), xs.clone(), [(0, 0, 0, 0.9)]).is_err());
        assert!(FiniteJoint::new(xs.clone(), xs.clone(), xs.clone(), [(0, 1, 0, 1.0)]).is_err());
        assert!(FiniteJoint::new(
            xs.clone(),
            xs.clone(),
            xs,
            [(0, 0, 0, 1.5), (0, 0, 0, -0.5)]
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn payoff_at_most_one(weights in proptest::collection::vec(0.0..1.0f64, 27)) {
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 1e-3);
            let vals = vec![-1.0, 0.1, 1.3];
            let atoms = (0..27).map(|i| (i / 9, (i / 3) % 3, i % 3, weights[i] / total));
            let j = FiniteJoint::new(vals.clone(), vals.clone(), vals.clone(), atoms).unwrap();
            // Normalize by the X-marginal variance, the discretized source.
            let mean: f64 = j.atoms().iter().map(|a| a.3 * vals[a.0]).sum();
            let var: f64 = j.atoms().iter().map(|a| a.3 * (vals[a.0] - mean).powi(2)).sum();
            prop_assume!(var > 1e-6);
            let src = GaussianSource::new(0.0, var).unwrap();
            let ev = evaluate_finite_strategy(&j, &src).unwrap();
            prop_assert!(ev.payoff.value() <= 1.0 + 1e-12);
            prop_assert!(ev.i_xy_given_u <= ev.i_x_uy + 1e-12);
        }
    }
}

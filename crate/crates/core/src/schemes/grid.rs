use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::model::RatePair;

/// Pairwise correlations of a jointly Gaussian `(X, Y, U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationTriple {
    pub rho_xy: f64,
    pub rho_xu: f64,
    pub rho_yu: f64,
}

impl CorrelationTriple {
    pub fn new(rho_xy: f64, rho_xu: f64, rho_yu: f64) -> Result<Self> {
        let t = Self {
            rho_xy,
            rho_xu,
            rho_yu,
        };
        if [rho_xy, rho_xu, rho_yu]
            .iter()
            .any(|r| !(-1.0..=1.0).contains(r))
        {
            return Err(invalid(format!(
                "correlations must lie in [-1, 1], got {t:?}"
            )));
        }
        if t.determinant() < 0.0 {
            return Err(invalid(format!(
                "correlations {t:?} do not form a covariance matrix"
            )));
        }
        Ok(t)
    }

    /// Determinant of the correlation matrix,
    /// `1 + 2ρxy ρxu ρyu − ρxy² − ρxu² − ρyu²`.
    pub fn determinant(&self) -> f64 {
        determinant(self.rho_xy, self.rho_xu, self.rho_yu)
    }

    /// The objective `ρxy² − ρxu²`.
    pub fn objective(&self) -> f64 {
        self.rho_xy * self.rho_xy - self.rho_xu * self.rho_xu
    }
}

fn determinant(a: f64, b: f64, c: f64) -> f64 {
    1.0 + 2.0 * a * b * c - a * a - b * b - c * c
}

/// `(I(X;Y|U), I(X;U,Y))` in bits for the jointly Gaussian triple: the key
/// and message rates it requires. Infinite on the singular boundary.
pub fn jointly_gaussian_constraints(t: &CorrelationTriple) -> (f64, f64) {
    let det = t.determinant();
    let (b2, c2) = (t.rho_xu * t.rho_xu, t.rho_yu * t.rho_yu);
    if det <= 0.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    (
        0.5 * ((1.0 - b2) * (1.0 - c2) / det).log2(),
        0.5 * ((1.0 - c2) / det).log2(),
    )
}

/// Result of the exhaustive correlation search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    pub g_max: f64,
    pub argmax: CorrelationTriple,
    /// Number of lattice points per axis.
    pub points_per_axis: usize,
}

/// Exhaustive search of `g = ρxy² − ρxu²` over valid correlation triples
/// on the lattice `−1 + i·step` that meet both rate constraints.
///
/// Ties are broken towards the lexicographically smallest triple, so the
/// result does not depend on how rayon splits the work.
pub fn verify_jointly_gaussian_grid(rates: RatePair, step: f64) -> Result<GridOptimum> {
    if !(step > 0.0 && step <= 0.05) {
        return Err(invalid(format!(
            "grid step must lie in (0, 0.05], got {step}"
        )));
    }
    let n = (2.0 / step + 1e-9).floor() as usize + 1;
    let axis: Vec<f64> = (0..n).map(|i| (-1.0 + i as f64 * step).min(1.0)).collect();
    let key_budget = (2.0 * rates.rs()).exp2();
    let rate_budget = (2.0 * rates.r()).exp2();

    let feasible = |a: f64, b: f64, c: f64| {
        let det = determinant(a, b, c);
        let one_minus_c2 = 1.0 - c * c;
        det > 0.0
            && (1.0 - b * b) * one_minus_c2 <= key_budget * det
            && one_minus_c2 <= rate_budget * det
    };

    let best = (0..n)
        .into_par_iter()
        .filter_map(|i| {
            let a = axis[i];
            let mut row_best: Option<(f64, [usize; 3])> = None;
            for (j, &b) in axis.iter().enumerate() {
                let g = a * a - b * b;
                if row_best.is_some_and(|(bg, _)| g <= bg) {
                    continue;
                }
                if let Some(k) = axis.iter().position(|&c| feasible(a, b, c)) {
                    row_best = Some((g, [i, j, k]));
                }
            }
            row_best
        })
        .reduce_with(|x, y| {
            if x.0 > y.0 || (x.0 == y.0 && x.1 < y.1) {
                x
            } else {
                y
            }
        });

    // The all-independent triple (0, 0, 0) is feasible at any rates, but
    // only lies on the lattice when 1/step is an integer.
    let (g_max, [i, j, k]) = best.ok_or_else(|| invalid("no feasible lattice point"))?;
    Ok(GridOptimum {
        g_max,
        argmax: CorrelationTriple {
            rho_xy: axis[i],
            rho_xu: axis[j],
            rho_yu: axis[k],
        },
        points_per_axis: n,
    })
}

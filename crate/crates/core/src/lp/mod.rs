//! Payoff of a scalar quantizer followed by lossless transmission, written
//! as a linear program over mixtures of posteriors on the quantized
//! alphabet.
//!
//! A disclosure `Û` splits the prior `p̂0` into posteriors `q_u` with
//! barycenter `p̂0`. Eve's error given `Û = u` is the score of `q_u`, and the
//! key must cover `H(X̂ | Û) = Σ_u w_u H(q_u)`. Fixing a finite candidate
//! family of posteriors leaves only the weights `w_u`, and the problem
//!
//! ```text
//! maximize Σ w_j score_j  s.t.  Σ w_j q_j = p̂0,  Σ w_j H(q_j) ≤ Rs,  w ≥ 0
//! ```
//!
//! is linear.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::model::{GaussianSource, PayoffValue, RatePair};
use crate::quantizer::{BinTable, QuantizerSpec, Reconstruction};
use crate::special::plogp_bits;

mod simplex;

/// Largest support handled by [`enumerate_subset_candidates`].
pub const DEFAULT_K_CAP: usize = 15;

/// The quantized source `X̂`: bin centroids and their masses, zero-mass
/// bins removed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPmf {
    points: Vec<f64>,
    probs: Vec<f64>,
}

impl QuantizedPmf {
    /// Points must be strictly increasing and the masses a probability
    /// vector (to 1e-10). Zero-mass points are dropped.
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if points.len() != probs.len() || points.is_empty() {
            return Err(invalid(
                "points and probabilities must be nonempty and of equal length",
            ));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid("probabilities must be finite and nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("probabilities sum to {total}")));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) || points.iter().any(|x| !x.is_finite()) {
            return Err(invalid("points must be finite and strictly increasing"));
        }
        let (points, probs) = points
            .into_iter()
            .zip(probs)
            .filter(|(_, p)| *p > 0.0)
            .unzip();
        Ok(Self { points, probs })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `H(X̂)` in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.probs.iter().copied().map(plogp_bits).sum()
    }

    pub fn mean(&self) -> f64 {
        dot(&self.probs, &self.points)
    }

    pub fn variance(&self) -> f64 {
        candidate_score(&self.probs, &self.points, ScoreMode::Continuous)
    }
}

/// Quantizes `src` with step `spec.t()` and keeps bin centroids as the
/// reconstruction alphabet, whatever `spec.reconstruction()` says.
pub fn build_quantized_pmf(source: &GaussianSource, spec: &QuantizerSpec) -> Result<QuantizedPmf> {
    let spec = QuantizerSpec::new(spec.t(), spec.k_max(), Reconstruction::Centroid)?;
    let table = BinTable::build(source, &spec)?;
    let points = table.indices().map(|k| table.centroid(k)).collect();
    QuantizedPmf::new(points, table.probs().to_vec())
}

/// How Eve's reconstruction is constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScoreMode {
    /// Any real estimate; the score is the posterior variance.
    #[default]
    Continuous,
    /// Estimates restricted to the quantization alphabet.
    AlphabetRestricted,
}

impl ScoreMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreMode::Continuous => "continuous",
            ScoreMode::AlphabetRestricted => "alphabet_restricted",
        }
    }
}

impl std::str::FromStr for ScoreMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(ScoreMode::Continuous),
            "alphabet_restricted" => Ok(ScoreMode::AlphabetRestricted),
            _ => Err(invalid(format!("unknown score mode `{s}`"))),
        }
    }
}

/// Eve's minimum expected squared error against posterior `q` on `points`.
///
/// In restricted mode the estimate ranges over every point of the alphabet,
/// not only those `q` charges.
pub fn candidate_score(q: &[f64], points: &[f64], mode: ScoreMode) -> f64 {
    let mass: f64 = q.iter().sum();
    let mean = dot(q, points) / mass;
    let spread = |z: f64| {
        q.iter()
            .zip(points)
            .map(|(p, x)| p * (x - z).powi(2))
            .sum::<f64>()
            / mass
    };
    match mode {
        ScoreMode::Continuous => spread(mean),
        ScoreMode::AlphabetRestricted => points
            .iter()
            .map(|&z| spread(z))
            .fold(f64::INFINITY, f64::min),
    }
}

/// One disclosure outcome: a posterior over the alphabet with its entropy
/// and Eve's score.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorCandidate {
    pub posterior: Vec<f64>,
    pub entropy_bits: f64,
    pub score: f64,
}

impl PosteriorCandidate {
    /// Scores an arbitrary posterior over `pmf`'s points; `posterior` is
    /// renormalized.
    pub fn new(pmf: &QuantizedPmf, posterior: Vec<f64>, mode: ScoreMode) -> Result<Self> {
        if posterior.len() != pmf.len() || posterior.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(invalid(
                "posterior must be a nonnegative vector over the pmf support",
            ));
        }
        let total: f64 = posterior.iter().sum();
        if total <= 0.0 {
            return Err(invalid("posterior has no mass"));
        }
        let posterior: Vec<f64> = posterior.into_iter().map(|p| p / total).collect();
        Ok(Self {
            entropy_bits: posterior.iter().copied().map(plogp_bits).sum(),
            score: candidate_score(&posterior, pmf.points(), mode),
            posterior,
        })
    }
}

/// Every restriction of `p̂0` to a nonempty subset `S` of the support,
/// ordered by the bitmask of `S`.
pub fn enumerate_subset_candidates(
    pmf: &QuantizedPmf,
    k_cap: usize,
    mode: ScoreMode,
) -> Result<Vec<PosteriorCandidate>> {
    let k = pmf.len();
    let cap = k_cap.min(31);
    if k > cap {
        return Err(Error::TooLargeInstance { size: k, cap });
    }
    (1u32..1 << k)
        .into_par_iter()
        .map(|mask| {
            let q = (0..k)
                .map(|i| {
                    if mask >> i & 1 == 1 {
                        pmf.probs[i]
                    } else {
                        0.0
                    }
                })
                .collect();
            PosteriorCandidate::new(pmf, q, mode)
        })
        .collect()
}

/// Why an [`LpSolution`] carries the value it does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    /// `R < H(X̂)`: the quantizer output cannot be sent losslessly.
    RateBelowEntropy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    /// `D`, Eve's expected error in source units squared.
    pub value: f64,
    /// One weight per candidate, in input order.
    pub weights: Vec<f64>,
    pub feasible: bool,
    /// `Rs − Σ w_j H(q_j)` in bits.
    pub slack_rs: f64,
    pub status: LpStatus,
}

/// Solves the secrecy LP over `candidates`.
///
/// Each barycenter row is divided by `p̂0(k)` and each column by its largest
/// entry, which turns the constraint matrix of the subset family into a 0/1
/// matrix. The solve is deterministic.
pub fn solve_secrecy_lp(
    pmf: &QuantizedPmf,
    rates: RatePair,
    candidates: &[PosteriorCandidate],
) -> Result<LpSolution> {
    if rates.r() < pmf.entropy_bits() - 1e-12 {
        return Ok(LpSolution {
            value: 0.0,
            weights: vec![0.0; candidates.len()],
            feasible: false,
            slack_rs: rates.rs(),
            status: LpStatus::RateBelowEntropy,
        });
    }
    if candidates.is_empty() {
        return Err(invalid("no candidates supplied"));
    }
    let k = pmf.len();
    if let Some(bad) = candidates.iter().position(|c| c.posterior.len() != k) {
        return Err(invalid(format!(
            "candidate {bad} has the wrong support size"
        )));
    }
    let scale: Vec<f64> = candidates
        .iter()
        .map(|c| {
            c.posterior
                .iter()
                .zip(&pmf.probs)
                .map(|(q, p)| q / p)
                .fold(0.0, f64::max)
        })
        .collect();
    let eq: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            candidates
                .iter()
                .zip(&scale)
                .map(|(c, s)| c.posterior[i] / (pmf.probs[i] * s))
                .collect()
        })
        .collect();
    let key_row = vec![candidates
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.entropy_bits / s)
        .collect()];
    let objective: Vec<f64> = candidates
        .iter()
        .zip(&scale)
        .map(|(c, s)| c.score / s)
        .collect();
    let rs = rates.rs().min(pmf.entropy_bits() + 1.0);
    let opt = simplex::maximize(&simplex::Problem {
        c: &objective,
        eq: (&eq, &vec![1.0; k]),
        le: (&key_row, &[rs]),
    })?;
    let weights: Vec<f64> = opt.x.iter().zip(&scale).map(|(u, s)| u / s).collect();
    let used = dot(
        &weights,
        &candidates
            .iter()
            .map(|c| c.entropy_bits)
            .collect::<Vec<_>>(),
    );
    Ok(LpSolution {
        value: opt.value.max(0.0),
        weights,
        feasible: true,
        slack_rs: rates.rs() - used,
        status: LpStatus::Optimal,
    })
}

/// `D / σ0²`.
pub fn lp_payoff(solution: &LpSolution, source: &GaussianSource) -> Result<PayoffValue> {
    if !solution.feasible {
        return Err(Error::Precondition("LP solution is infeasible".into()));
    }
    Ok(PayoffValue::new(solution.value / source.variance()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

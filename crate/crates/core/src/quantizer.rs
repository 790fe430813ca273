//! Symmetric uniform quantization of a Gaussian source about its mean.
//!
//! The source value `x` falls in bin `n = round((x − μ0)/T)`. Bin `k`
//! covers `μ0 + ((k − ½)T, (k + ½)T]`; the lattice reconstruction is
//! `μ0 + kT` and the centroid reconstruction is the conditional mean of the
//! bin. The [`BinTable`] holds exact per-bin statistics, from which the
//! entropies and squared-error terms follow as finite sums.

use std::ops::RangeInclusive;

use crate::error::{invalid, Error, Result};
use crate::model::{GaussianSource, StdTruncation};
use crate::special::{binary_entropy_bits, plogp_bits};

/// Tail mass left outside the enumerated bins before folding.
pub const TAIL_MASS: f64 = 1e-12;

/// Largest bin index a table will enumerate.
pub const MAX_BIN_INDEX: i64 = 1 << 22;

/// How Bob (or any decoder) maps a bin back to a source value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reconstruction {
    /// `μ0 + kT`.
    Lattice,
    /// Conditional mean of the bin.
    Centroid,
}

/// Geometry of a symmetric uniform quantizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerSpec {
    t: f64,
    k_max: i64,
    reconstruction: Reconstruction,
}

impl QuantizerSpec {
    pub fn new(t: f64, k_max: i64, reconstruction: Reconstruction) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!(
                "quantizer step must be positive and finite, got {t}"
            )));
        }
        if !(1..=MAX_BIN_INDEX).contains(&k_max) {
            return Err(invalid(format!(
                "k_max must lie in 1..={MAX_BIN_INDEX}, got {k_max}"
            )));
        }
        Ok(Self {
            t,
            k_max,
            reconstruction,
        })
    }

    /// Step `t` with lattice reconstruction; `k_max` is grown as needed.
    pub fn lattice(t: f64) -> Result<Self> {
        Self::new(t, 1, Reconstruction::Lattice)
    }

    pub fn centroid(t: f64) -> Result<Self> {
        Self::new(t, 1, Reconstruction::Centroid)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn reconstruction(&self) -> Reconstruction {
        self.reconstruction
    }

    pub fn with_t(self, t: f64) -> Result<Self> {
        Self::new(t, self.k_max, self.reconstruction)
    }
}

/// Nearest lattice index of `(x − mu0)/t`, ties to even.
pub fn quantize_index(x: f64, t: f64, mu0: f64) -> i64 {
    ((x - mu0) / t).round_ties_even() as i64
}

/// Exact per-bin statistics of a quantized Gaussian source.
///
/// Bins `−k_max..=k_max` are enumerated until the mass outside them is
/// below [`TAIL_MASS`]; the two outermost bins then absorb the remaining
/// tails, so the table is an exact partition of the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct BinTable {
    source: GaussianSource,
    t: f64,
    k_max: i64,
    prob: Vec<f64>,
    // Centroid minus μ0.
    offset: Vec<f64>,
    variance: Vec<f64>,
}

impl BinTable {
    pub fn build(source: &GaussianSource, spec: &QuantizerSpec) -> Result<Self> {
        let sigma = source.std_dev();
        let tau = spec.t / sigma;
        let mut k_max = spec.k_max;
        while 2.0 * crate::special::std_normal_sf((k_max as f64 + 0.5) * tau) > TAIL_MASS {
            k_max += 1;
            if k_max > MAX_BIN_INDEX {
                return Err(invalid(format!(
                    "quantizer step {} is too fine: more than {MAX_BIN_INDEX} bins per side",
                    spec.t
                )));
            }
        }
        let n = (2 * k_max + 1) as usize;
        let mut prob = Vec::with_capacity(n);
        let mut offset = Vec::with_capacity(n);
        let mut variance = Vec::with_capacity(n);
        for k in -k_max..=k_max {
            let lo = if k == -k_max {
                f64::NEG_INFINITY
            } else {
                (k as f64 - 0.5) * tau
            };
            let hi = if k == k_max {
                f64::INFINITY
            } else {
                (k as f64 + 0.5) * tau
            };
            let tr = StdTruncation::new(lo, hi);
            prob.push(tr.mass);
            if tr.mass > 0.0 {
                offset.push(sigma * tr.mean);
                variance.push(source.variance() * tr.variance());
            } else {
                let near = if lo.abs() <= hi.abs() { lo } else { hi };
                offset.push(sigma * near);
                variance.push(0.0);
            }
        }
        Ok(Self {
            source: *source,
            t: spec.t,
            k_max,
            prob,
            offset,
            variance,
        })
    }

    /// Builds a table from raw per-bin columns, indexed `−k_max..=k_max`.
    /// Centroids are in source units. Intended for tests and for tables
    /// computed elsewhere.
    pub fn from_parts(
        source: &GaussianSource,
        t: f64,
        prob: Vec<f64>,
        centroid: Vec<f64>,
        variance: Vec<f64>,
    ) -> Result<Self> {
        let n = prob.len();
        if n.is_multiple_of(2) || centroid.len() != n || variance.len() != n {
            return Err(invalid("bin columns must have equal odd length"));
        }
        let total: f64 = prob.iter().sum();
        if prob.iter().any(|&p| p.is_nan() || p < 0.0) || (total - 1.0).abs() > 1e-10 {
            return Err(invalid(format!(
                "bin probabilities must be nonnegative and sum to 1, got {total}"
            )));
        }
        let offset = centroid.iter().map(|c| c - source.mean()).collect();
        Ok(Self {
            source: *source,
            t,
            k_max: (n / 2) as i64,
            prob,
            offset,
            variance,
        })
    }

    pub fn source(&self) -> &GaussianSource {
        &self.source
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Largest enumerated bin index after tail extension.
    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn indices(&self) -> RangeInclusive<i64> {
        -self.k_max..=self.k_max
    }

    pub fn len(&self) -> usize {
        self.prob.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prob.is_empty()
    }

    fn slot(&self, k: i64) -> usize {
        (k + self.k_max) as usize
    }

    /// Clamps an arbitrary lattice index onto the table; the outermost bins
    /// contain the tails.
    pub fn bin_of(&self, n: i64) -> i64 {
        n.clamp(-self.k_max, self.k_max)
    }

    pub fn probs(&self) -> &[f64] {
        &self.prob
    }

    pub fn prob(&self, k: i64) -> f64 {
        self.prob[self.slot(k)]
    }

    pub fn centroid(&self, k: i64) -> f64 {
        self.source.mean() + self.offset[self.slot(k)]
    }

    pub fn variance(&self, k: i64) -> f64 {
        self.variance[self.slot(k)]
    }

    pub fn second_moment(&self, k: i64) -> f64 {
        let c = self.centroid(k);
        self.variance(k) + c * c
    }

    pub fn lattice_point(&self, k: i64) -> f64 {
        self.source.mean() + k as f64 * self.t
    }

    pub fn reconstruct(&self, k: i64, rule: Reconstruction) -> f64 {
        match rule {
            Reconstruction::Lattice => self.lattice_point(k),
            Reconstruction::Centroid => self.centroid(k),
        }
    }

    /// H(Y) in bits.
    pub fn entropy_y(&self) -> f64 {
        self.prob.iter().copied().map(plogp_bits).sum()
    }

    /// H(Y | |Y|) in bits, i.e. the sign uncertainty left once the
    /// magnitude is known.
    pub fn cond_entropy_given_abs(&self) -> Result<f64> {
        self.check_symmetric()?;
        let mut h = 0.0;
        for u in 1..=self.k_max {
            let (pp, pn) = (self.prob(u), self.prob(-u));
            let pu = pp + pn;
            if pu > 0.0 {
                h += pu * binary_entropy_bits(pp / pu);
            }
        }
        Ok(h)
    }

    /// H(Y | U) in bits with `U = n mod n_mod` (nonnegative residues).
    pub fn cond_entropy_given_mod(&self, n_mod: u64) -> Result<f64> {
        let classes = self.residue_classes(n_mod)?;
        let mut h = 0.0;
        for (k, &p) in self.indices().zip(&self.prob) {
            if p > 0.0 {
                let pu = classes.mass[self.residue(k, n_mod)];
                h -= p * (p / pu).log2();
            }
        }
        Ok(h.max(0.0))
    }

    /// Bob's mean squared error E[(recon(n) − X)²].
    pub fn bob_distortion(&self, rule: Reconstruction) -> f64 {
        self.indices()
            .zip(self.prob.iter().zip(self.offset.iter().zip(&self.variance)))
            .map(|(k, (&p, (&off, &var)))| {
                let bias = match rule {
                    Reconstruction::Lattice => off - k as f64 * self.t,
                    Reconstruction::Centroid => 0.0,
                };
                p * (var + bias * bias)
            })
            .sum()
    }

    /// Eve's MMSE E[(X − E[X | U])²] with `U = n mod n_mod`.
    ///
    /// Evaluated as within-bin variance plus the spread of centroids around
    /// their residue-class means, which is the same quantity as
    /// `E[X²] − Σ_u P(u)·E[X|u]²` without the cancellation.
    pub fn eve_mmse_given_mod(&self, n_mod: u64) -> Result<f64> {
        let classes = self.residue_classes(n_mod)?;
        Ok(self.grouped_mmse(|k| self.residue(k, n_mod), &classes.offset_mean))
    }

    /// Eve's MMSE when she learns `|n|`.
    pub fn eve_mmse_given_abs(&self) -> Result<f64> {
        self.check_symmetric()?;
        let kn = self.k_max as usize + 1;
        let mut mass = vec![0.0; kn];
        let mut first = vec![0.0; kn];
        for (k, (&p, &off)) in self.indices().zip(self.prob.iter().zip(&self.offset)) {
            let u = k.unsigned_abs() as usize;
            mass[u] += p;
            first[u] += p * off;
        }
        let means: Vec<f64> = mass
            .iter()
            .zip(&first)
            .map(|(&m, &f)| if m > 0.0 { f / m } else { 0.0 })
            .collect();
        Ok(self.grouped_mmse(|k| k.unsigned_abs() as usize, &means))
    }

    fn grouped_mmse(&self, class: impl Fn(i64) -> usize, means: &[f64]) -> f64 {
        self.indices()
            .zip(self.prob.iter().zip(self.offset.iter().zip(&self.variance)))
            .map(|(k, (&p, (&off, &var)))| {
                let d = off - means[class(k)];
                p * (var + d * d)
            })
            .sum()
    }

    fn residue_classes(&self, n_mod: u64) -> Result<ResidueClasses> {
        if n_mod == 0 {
            return Err(invalid("modulus N must be at least 1"));
        }
        let width = if self.reveals(n_mod) {
            self.prob.len()
        } else {
            n_mod as usize
        };
        let mut mass = vec![0.0; width];
        let mut first = vec![0.0; width];
        for (k, (&p, &off)) in self.indices().zip(self.prob.iter().zip(&self.offset)) {
            let u = self.residue(k, n_mod);
            mass[u] += p;
            first[u] += p * off;
        }
        let offset_mean = mass
            .iter()
            .zip(&first)
            .map(|(&m, &f)| if m > 0.0 { f / m } else { 0.0 })
            .collect();
        Ok(ResidueClasses { mass, offset_mean })
    }

    /// True when `n mod n_mod` identifies the bin.
    fn reveals(&self, n_mod: u64) -> bool {
        n_mod >= self.prob.len() as u64
    }

    /// Class slot of bin `k` under `n mod n_mod` with nonnegative residues.
    /// Once the modulus reveals the bin every class is a singleton, so the
    /// bin slot is used directly.
    fn residue(&self, k: i64, n_mod: u64) -> usize {
        if self.reveals(n_mod) {
            self.slot(k)
        } else {
            k.rem_euclid(n_mod as i64) as usize
        }
    }

    fn check_symmetric(&self) -> Result<()> {
        let sd = self.source.std_dev();
        for k in 1..=self.k_max {
            let (a, b) = (self.slot(k), self.slot(-k));
            if (self.prob[a] - self.prob[b]).abs() > 1e-12
                || (self.offset[a] + self.offset[b]).abs() > 1e-12 * sd.max(self.offset[a].abs())
            {
                return Err(Error::Internal(format!(
                    "bin table is not symmetric about the mean at index {k}"
                )));
            }
        }
        Ok(())
    }
}

struct ResidueClasses {
    mass: Vec<f64>,
    offset_mean: Vec<f64>,
}

/// Result of searching for the quantizer step that meets a rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepChoice {
    pub t: f64,
    pub entropy_bits: f64,
    /// False when H(Y) was not monotone on the bracket and a grid scan was
    /// used instead of bisection.
    pub bisected: bool,
}

const BISECTION_TOL_BITS: f64 = 1e-4;
const MONOTONE_PROBES: usize = 33;
const FALLBACK_GRID: usize = 512;

/// Default bracket `(lo, hi)` for [`step_for_rate`], in source units.
pub fn default_step_bracket(source: &GaussianSource, r: f64) -> (f64, f64) {
    let sd = source.std_dev();
    let cover = (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt() * sd * (-r).exp2();
    ((1e-3 * sd).min(cover / 4.0), 100.0 * sd)
}

/// Finest step `t` in `bracket` whose quantizer entropy H(Y) does not
/// exceed `r` bits, to within [`BISECTION_TOL_BITS`].
///
/// H(Y) is checked for monotonicity on a log-spaced probe grid first; if it
/// is not monotone the answer comes from a 512-point log-spaced scan.
pub fn step_for_rate(
    source: &GaussianSource,
    r: f64,
    bracket: (f64, f64),
    template: &QuantizerSpec,
) -> Result<StepChoice> {
    let (lo, hi) = bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(invalid(format!("invalid step bracket ({lo}, {hi})")));
    }
    let entropy =
        |t: f64| -> Result<f64> { Ok(BinTable::build(source, &template.with_t(t)?)?.entropy_y()) };
    let geo = |i: usize, n: usize| lo * (hi / lo).powf(i as f64 / (n - 1) as f64);

    let h_hi = entropy(hi)?;
    if h_hi > r {
        return Err(invalid(format!(
            "rate {r} bits is below H(Y) = {h_hi} at the coarsest step {hi}"
        )));
    }
    let h_lo = entropy(lo)?;
    if h_lo <= r {
        return Ok(StepChoice {
            t: lo,
            entropy_bits: h_lo,
            bisected: true,
        });
    }

    let mut prev = f64::INFINITY;
    let mut monotone = true;
    for i in 0..MONOTONE_PROBES {
        let h = entropy(geo(i, MONOTONE_PROBES))?;
        if h > prev + 1e-12 {
            monotone = false;
            break;
        }
        prev = h;
    }

    if !monotone {
        let mut best = StepChoice {
            t: hi,
            entropy_bits: h_hi,
            bisected: false,
        };
        for i in 0..FALLBACK_GRID {
            let t = geo(i, FALLBACK_GRID);
            let h = entropy(t)?;
            if h <= r {
                best = StepChoice {
                    t,
                    entropy_bits: h,
                    bisected: false,
                };
                break;
            }
        }
        return Ok(best);
    }

    let (mut t_lo, mut t_hi, mut e_lo, mut e_hi) = (lo, hi, h_lo, h_hi);
    while e_lo - e_hi > BISECTION_TOL_BITS && t_hi / t_lo - 1.0 > 1e-13 {
        let mid = (t_lo * t_hi).sqrt();
        let e = entropy(mid)?;
        if e <= r {
            t_hi = mid;
            e_hi = e;
        } else {
            t_lo = mid;
            e_lo = e;
        }
    }
    Ok(StepChoice {
        t: t_hi,
        entropy_bits: e_hi,
        bisected: true,
    })
}

//! Oracles implemented independently of the library internals.

#![allow(dead_code)]

use gauss_secrecy::lp::PosteriorCandidate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Dense LP by enumerating every basis of
/// `Σ w_j q_j = p, Σ w_j h_j + s = rs, w, s ≥ 0` and keeping the best
/// feasible vertex.
pub fn brute_force_lp(p: &[f64], rs: f64, cands: &[PosteriorCandidate]) -> f64 {
    let k = p.len();
    let m = cands.len() + 1;
    let rows = k + 1;
    let column = |j: usize| -> Vec<f64> {
        if j < cands.len() {
            let mut c = cands[j].posterior.clone();
            c.push(cands[j].entropy_bits);
            c
        } else {
            let mut c = vec![0.0; k];
            c.push(1.0);
            c
        }
    };
    let cost = |j: usize| if j < cands.len() { cands[j].score } else { 0.0 };
    let mut rhs = p.to_vec();
    rhs.push(rs);

    let mut best = f64::NEG_INFINITY;
    let mut idx: Vec<usize> = (0..rows).collect();
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&j| column(j)).collect();
        if let Some(w) = solve_columns(&a, &rhs) {
            if w.iter().all(|&v| v >= -1e-12) {
                let v: f64 = w.iter().zip(&idx).map(|(x, &j)| x * cost(j)).sum();
                best = best.max(v);
            }
        }
        // Next combination in lexicographic order.
        let mut i = rows;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - rows + i {
                break;
            }
        }
        idx[i] += 1;
        for t in i + 1..rows {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Solves `Σ_j x_j cols[j] = b` by Gaussian elimination with partial
/// pivoting; `None` when singular.
fn solve_columns(cols: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = cols.iter().map(|c| c[i]).collect();
            row.push(b[i]);
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[piv][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, piv);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                let pivot_row = a[c].clone();
                for (v, p) in a[r].iter_mut().zip(&pivot_row).skip(c) {
                    *v -= f * p;
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Box–Muller normal pair from a uniform source.
fn normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let a = std::f64::consts::TAU * u2;
    (r * a.cos(), r * a.sin())
}

fn h2(p: f64) -> f64 {
    let f = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    f(p) + f(1.0 - p)
}

/// Monte Carlo estimate of `I(X; sgn Y | |Y|)` and its standard error, from
/// the explicit posterior `P(Y > 0 | X, |Y|)` formed by Bayes' rule.
pub fn sign_split_mc(r: f64, samples: usize, seed: u64) -> (f64, f64) {
    let rho2 = 1.0 - 4f64.powf(-r);
    let rho = rho2.sqrt();
    let cond_var = 1.0 - rho2;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let (mut mean, mut m2) = (0.0, 0.0);
    for i in 0..samples {
        let (x, e) = normal_pair(&mut rng);
        let u = (rho * x + cond_var.sqrt() * e).abs();
        let lp = -(u - rho * x).powi(2) / (2.0 * cond_var);
        let ln = -(u + rho * x).powi(2) / (2.0 * cond_var);
        let p = 1.0 / (1.0 + (ln - lp).exp());
        let h = h2(p);
        let d = h - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (h - mean);
    }
    let n = samples as f64;
    (1.0 - mean, (m2 / (n - 1.0) / n).sqrt())
}

//! Dense two-phase simplex.
//!
//! Entering columns follow Dantzig's rule (most negative reduced cost,
//! lowest index on ties) until a run of degenerate pivots appears, after
//! which Bland's rule takes over for the rest of the solve and guarantees
//! termination. Both rules are deterministic.

use crate::error::{Error, Result};

const EPS: f64 = 1e-11;
const DEGENERATE_RUN: usize = 32;

/// `maximize c·x` subject to `eq.0 x = eq.1`, `le.0 x ≤ le.1`, `x ≥ 0`,
/// with every right-hand side nonnegative.
pub(crate) struct Problem<'a> {
    pub c: &'a [f64],
    pub eq: (&'a [Vec<f64>], &'a [f64]),
    pub le: (&'a [Vec<f64>], &'a [f64]),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    obj: Vec<f64>,
    width: usize,
    pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            let f = row[c];
            if i != r && f != 0.0 {
                row.iter_mut()
                    .zip(&pivot_row)
                    .for_each(|(v, pv)| *v -= f * pv);
            }
        }
        let f = self.obj.get(c).copied().unwrap_or(0.0);
        if f != 0.0 {
            self.obj
                .iter_mut()
                .zip(&pivot_row)
                .for_each(|(v, pv)| *v -= f * pv);
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Loads reduced costs for `maximize cost·x` given the current basis.
    fn load_objective(&mut self, cost: &[f64]) {
        self.obj = cost.iter().map(|c| -c).chain([0.0]).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                self.obj
                    .iter_mut()
                    .zip(&self.rows[i])
                    .for_each(|(v, a)| *v += cb * a);
            }
        }
    }

    fn entering(&self, allowed: usize, bland: bool) -> Option<usize> {
        if bland {
            return (0..allowed).find(|&j| self.obj[j] < -EPS);
        }
        let mut best: Option<usize> = None;
        for j in 0..allowed {
            if self.obj[j] < -EPS && best.is_none_or(|b| self.obj[j] < self.obj[b]) {
                best = Some(j);
            }
        }
        best
    }

    fn run(&mut self, allowed: usize) -> Result<()> {
        let mut bland = false;
        let mut degenerate = 0;
        loop {
            let Some(c) = self.entering(allowed, bland) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a > EPS {
                    let ratio = self.rhs(i) / a;
                    let better = match leave {
                        None => true,
                        Some((l, best)) => {
                            ratio < best - EPS
                                || (ratio <= best + EPS && self.basis[i] < self.basis[l])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, step) =
                leave.ok_or_else(|| Error::Solver(format!("unbounded along column {c}")))?;
            degenerate = if step <= EPS { degenerate + 1 } else { 0 };
            bland |= degenerate >= DEGENERATE_RUN;
            if self.pivots >= self.max_pivots {
                return Err(Error::Solver(format!(
                    "no convergence after {} pivots ({} rows, {} columns)",
                    self.pivots,
                    self.rows.len(),
                    self.width
                )));
            }
            self.pivot(r, c);
        }
    }
}

pub(crate) fn maximize(p: &Problem<'_>) -> Result<Optimum> {
    let n = p.c.len();
    let (m_eq, m_le) = (p.eq.0.len(), p.le.0.len());
    let slack0 = n;
    let art0 = n + m_le;
    let width = art0 + m_eq;
    if p.eq.0.iter().chain(p.le.0).any(|a| a.len() != n) {
        return Err(Error::Solver(
            "constraint row width differs from the objective".into(),
        ));
    }
    let mut rows = Vec::with_capacity(m_eq + m_le);
    let mut basis = Vec::with_capacity(m_eq + m_le);
    for (i, (a, &b)) in p.eq.0.iter().zip(p.eq.1).enumerate() {
        let mut row = vec![0.0; width + 1];
        row[..n].copy_from_slice(a);
        row[art0 + i] = 1.0;
        row[width] = b;
        rows.push(row);
        basis.push(art0 + i);
    }
    for (i, (a, &b)) in p.le.0.iter().zip(p.le.1).enumerate() {
        let mut row = vec![0.0; width + 1];
        row[..n].copy_from_slice(a);
        row[slack0 + i] = 1.0;
        row[width] = b;
        rows.push(row);
        basis.push(slack0 + i);
    }
    if rows.iter().any(|r| r[width] < 0.0) {
        return Err(Error::Solver("negative right-hand side".into()));
    }
    let mut tab = Tableau {
        rows,
        basis,
        obj: Vec::new(),
        width,
        pivots: 0,
        max_pivots: 50 * (width + m_eq + m_le) + 1000,
    };

    // Columns that are nonzero in a single equality row replace its
    // artificial without changing the right-hand sides' signs.
    for i in 0..m_eq {
        let unit = (0..n).find(|&j| {
            tab.rows[i][j] > EPS
                && tab
                    .rows
                    .iter()
                    .enumerate()
                    .all(|(r, row)| r == i || row[j] == 0.0)
        });
        if let Some(j) = unit {
            tab.pivot(i, j);
        }
    }

    let phase1: Vec<f64> = (0..width)
        .map(|j| if j >= art0 { -1.0 } else { 0.0 })
        .collect();
    tab.load_objective(&phase1);
    tab.run(width)?;
    let infeasibility = -tab.obj[width];
    if infeasibility > 1e-9 {
        return Err(Error::Solver(format!(
            "constraints infeasible (residual {infeasibility:e})"
        )));
    }
    // Pivot remaining zero-level artificials out of the basis, dropping
    // rows that turn out redundant.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= art0 {
            match (0..art0).find(|&j| tab.rows[i][j].abs() > EPS) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let phase2: Vec<f64> = (0..width)
        .map(|j| if j < n { p.c[j] } else { 0.0 })
        .collect();
    tab.load_objective(&phase2);
    tab.run(art0)?;

    let mut x = vec![0.0; n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            x[b] = tab.rhs(i).max(0.0);
        }
    }
    let value = x.iter().zip(p.c).map(|(a, b)| a * b).sum();
    Ok(Optimum {
        x,
        value,
        pivots: tab.pivots,
    })
}

use std::fs;
use std::io::Write;
use std::path::Path;

use gauss_secrecy::error::Error;
use gauss_secrecy::lp::{
    build_quantized_pmf, enumerate_subset_candidates, lp_payoff, solve_secrecy_lp, LpSolution,
    LpStatus, PosteriorCandidate, QuantizedPmf, DEFAULT_K_CAP,
};
use gauss_secrecy::model::{GaussianSource, RatePair};
use gauss_secrecy::quantizer::{BinTable, QuantizerSpec, Reconstruction};
use gauss_secrecy::schemes::{
    greedy_quantized_scheme, jointly_gaussian_payoff, optimal_high_key_payoff,
    weak_eavesdropper_payoff, GreedySearch, SchemeId,
};
use gauss_secrecy::sim::{run_sim, SimConfig, SimScheme};
use gauss_secrecy::verify::run_suite;

use crate::args::{Common, CurveArgs, LpArgs, QuantizerStatsArgs, SimArgs, VerifyArgs};
use crate::format::{g12, opt_g12};
use crate::Failure;

type CmdResult = Result<(), Failure>;

pub const CURVE_HEADER: [&str; 8] = [
    "scheme", "R_bits", "Rs_bits", "payoff", "T", "N", "feasible", "notes",
];

/// One output line of `curve` and `lp`.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scheme: SchemeId,
    pub r_bits: f64,
    pub rs_bits: f64,
    pub payoff: Option<f64>,
    pub t: Option<f64>,
    pub n_mod: Option<u64>,
    pub feasible: bool,
    pub notes: String,
}

impl CsvRow {
    fn new(scheme: SchemeId, rates: RatePair) -> Self {
        Self {
            scheme,
            r_bits: rates.r(),
            rs_bits: rates.rs(),
            payoff: None,
            t: None,
            n_mod: None,
            feasible: false,
            notes: String::new(),
        }
    }

    fn record(&self) -> [String; 8] {
        [
            self.scheme.as_str().to_owned(),
            g12(self.r_bits),
            g12(self.rs_bits),
            opt_g12(self.payoff),
            opt_g12(self.t),
            self.n_mod.map(|n| n.to_string()).unwrap_or_default(),
            self.feasible.to_string(),
            self.notes.clone(),
        ]
    }
}

fn csv_bytes<I, R>(header: &[&str], records: I) -> Result<Vec<u8>, Failure>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::internal(format!("csv encoding: {e}"));
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner()
        .map_err(|e| Failure::internal(format!("csv encoding: {e}")))
}

/// Rejects `--out` paths whose directory is missing or that name a directory.
fn check_out(common: &Common) -> CmdResult {
    let Some(path) = &common.out else {
        return Ok(());
    };
    if path.is_dir() {
        return Err(Failure::usage(format!(
            "--out {}: is a directory",
            path.display()
        )));
    }
    let parent = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    if !parent.is_dir() {
        return Err(Failure::usage(format!(
            "--out {}: directory {} does not exist",
            path.display(),
            parent.display()
        )));
    }
    Ok(())
}

fn emit(common: &Common, bytes: &[u8]) -> CmdResult {
    match &common.out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failure::usage(format!("--out {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Failure::internal(format!("stdout: {e}")))
        }
    }
}

fn source(common: &Common) -> Result<GaussianSource, Failure> {
    GaussianSource::new(common.mu, common.sigma2).map_err(|e| {
        Failure::usage(format!(
            "--sigma2 {} / --mu {}: {e}",
            common.sigma2, common.mu
        ))
    })
}

fn rate(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Failure::usage(format!(
            "{flag} must be a nonnegative number of bits, got {v}"
        )))
    }
}

fn step(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::usage(format!("{flag} must be positive, got {v}")))
    }
}

fn pair(r: f64, rs: f64) -> Result<RatePair, Failure> {
    RatePair::new(r, rs).map_err(|e| Failure::usage(format!("--r {r} / --rs {rs}: {e}")))
}

fn lp_note(pmf: &QuantizedPmf, sol: &LpSolution) -> String {
    let base = format!(
        "D={}; H(X̂)={}; K={}",
        g12(sol.value),
        g12(pmf.entropy_bits()),
        pmf.len()
    );
    match sol.status {
        LpStatus::Optimal => base,
        LpStatus::RateBelowEntropy => format!("{base}; R below H(X̂)"),
    }
}

fn lp_row(
    pmf: &QuantizedPmf,
    sol: &LpSolution,
    rates: RatePair,
    t: Option<f64>,
    src: &GaussianSource,
) -> CsvRow {
    CsvRow {
        payoff: lp_payoff(sol, src).ok().map(|p| p.value()),
        t,
        feasible: sol.feasible,
        notes: lp_note(pmf, sol),
        ..CsvRow::new(SchemeId::LpQuantized, rates)
    }
}

fn infeasible_row(scheme: SchemeId, rates: RatePair, e: Error) -> Result<CsvRow, Failure> {
    match e {
        Error::InfeasibleKeyRate { .. } | Error::OutOfRegime { .. } => Ok(CsvRow {
            notes: e.to_string(),
            ..CsvRow::new(scheme, rates)
        }),
        other => Err(other.into()),
    }
}

struct LpInstance {
    pmf: QuantizedPmf,
    candidates: Vec<PosteriorCandidate>,
    t: f64,
}

pub fn curve(a: &CurveArgs) -> CmdResult {
    check_out(&a.common)?;
    let src = source(&a.common)?;
    let rs_grid = match (a.rs, a.rs_range) {
        (Some(rs), _) => vec![rate("--rs", rs)?],
        (None, Some(range)) => range.points(),
        (None, None) => return Err(Failure::usage("one of --rs or --rs-range is required")),
    };
    let r_grid = match (a.r, a.r_range) {
        (Some(r), _) => vec![rate("--r", r)?],
        (None, Some(range)) => range.points(),
        (None, None) => return Err(Failure::usage("one of --r or --r-range is required")),
    };
    if a.schemes.is_empty() {
        return Err(Failure::usage("--schemes must name at least one scheme"));
    }
    if a.schemes.contains(&SchemeId::QuantizedGreedy) {
        if r_grid.iter().any(|&r| r <= 0.0) {
            return Err(Failure::usage("--r must be positive for quantized_greedy"));
        }
        if a.n_max == Some(0) {
            return Err(Failure::usage("--n-max must be at least 1"));
        }
    }
    let t =
        a.t.map(|t| step("--t", t))
            .transpose()?
            .unwrap_or(src.std_dev());
    let lp = if a.schemes.contains(&SchemeId::LpQuantized) {
        let pmf = build_quantized_pmf(&src, &QuantizerSpec::centroid(t)?)?;
        let candidates = enumerate_subset_candidates(&pmf, DEFAULT_K_CAP, a.mode)?;
        Some(LpInstance { pmf, candidates, t })
    } else {
        None
    };
    let search = GreedySearch {
        n_max: a.n_max,
        ..GreedySearch::default()
    };

    let mut rows = Vec::new();
    for &scheme in &a.schemes {
        for &r in &r_grid {
            for &rs in &rs_grid {
                let rates = pair(r, rs)?;
                let row = match scheme {
                    SchemeId::Weak => match weak_eavesdropper_payoff(rates) {
                        Ok(p) => CsvRow {
                            payoff: Some(p.value()),
                            feasible: true,
                            ..CsvRow::new(scheme, rates)
                        },
                        Err(e) => infeasible_row(scheme, rates, e)?,
                    },
                    SchemeId::JointlyGaussian => CsvRow {
                        payoff: Some(jointly_gaussian_payoff(rates).value()),
                        feasible: true,
                        ..CsvRow::new(scheme, rates)
                    },
                    SchemeId::OptimalHighKey => match optimal_high_key_payoff(rates) {
                        Ok(p) => CsvRow {
                            payoff: Some(p.value()),
                            feasible: true,
                            ..CsvRow::new(scheme, rates)
                        },
                        Err(e) => infeasible_row(scheme, rates, e)?,
                    },
                    SchemeId::QuantizedGreedy => {
                        let p = greedy_quantized_scheme(&src, rates, &search)?;
                        CsvRow {
                            payoff: p.meta.feasible.then_some(p.payoff.value()),
                            t: p.meta.t,
                            n_mod: p.meta.n_mod,
                            feasible: p.meta.feasible,
                            notes: p.meta.notes.join(";"),
                            ..CsvRow::new(scheme, rates)
                        }
                    }
                    SchemeId::LpQuantized => {
                        let inst = lp.as_ref().expect("lp instance built");
                        let sol = solve_secrecy_lp(&inst.pmf, rates, &inst.candidates)?;
                        lp_row(&inst.pmf, &sol, rates, Some(inst.t), &src)
                    }
                };
                rows.push(row);
            }
        }
    }
    let bytes = csv_bytes(&CURVE_HEADER, rows.iter().map(CsvRow::record))?;
    emit(&a.common, &bytes)
}

pub const SIM_HEADER: [&str; 18] = [
    "scheme",
    "scenario",
    "R_bits",
    "Rs_bits",
    "seed",
    "n",
    "T",
    "empirical_payoff",
    "std_error",
    "bob_mse",
    "eve_mse",
    "bob_std_error",
    "eve_std_error",
    "analytic_payoff",
    "analytic_bob_mse",
    "analytic_eve_mse",
    "model_rate_bits",
    "model_key_bits",
];

pub fn sim(a: &SimArgs) -> CmdResult {
    check_out(&a.common)?;
    let src = source(&a.common)?;
    let rates = pair(rate("--r", a.r)?, rate("--rs", a.rs)?)?;
    if a.n == 0 {
        return Err(Failure::usage("--n must be at least 1"));
    }
    match a.scheme {
        SimScheme::SignPad if a.rs < 1.0 => {
            return Err(Failure::usage(format!(
                "--rs must be at least 1 for sign_pad, got {}",
                a.rs
            )));
        }
        SimScheme::FullEncryption if a.rs <= 0.0 => {
            return Err(Failure::usage("--rs must be positive for full_encryption"));
        }
        _ => {}
    }
    let quantizer =
        a.t.map(|t| step("--t", t).and_then(|t| Ok(QuantizerSpec::new(t, 1, a.reconstruction)?)))
            .transpose()?;
    if quantizer.is_none() && a.r == 0.0 {
        return Err(Failure::usage("--r must be positive unless --t is given"));
    }
    let config = SimConfig {
        scheme: a.scheme,
        scenario: a.scenario,
        rates,
        quantizer,
        n_symbols: a.n,
        seed: a.seed,
    };
    let res = run_sim(&config, &src).map_err(|e| match e {
        Error::InvalidConfig(msg) => Failure::usage(format!("--t / --r / --rs: {msg}")),
        other => other.into(),
    })?;
    let record = [
        a.scheme.as_str().to_owned(),
        a.scenario.as_str().to_owned(),
        g12(a.r),
        g12(a.rs),
        a.seed.to_string(),
        a.n.to_string(),
        g12(res.t),
        g12(res.empirical_payoff),
        g12(res.std_error),
        g12(res.bob_mse),
        g12(res.eve_mse),
        g12(res.bob_std_error),
        g12(res.eve_std_error),
        g12(res.analytic_payoff),
        g12(res.analytic_bob_mse),
        g12(res.analytic_eve_mse),
        g12(res.model_rate_bits),
        g12(res.model_key_bits),
    ];
    let bytes = csv_bytes(&SIM_HEADER, [record])?;
    emit(&a.common, &bytes)?;
    let z = (res.empirical_payoff - res.analytic_payoff) / res.std_error;
    eprintln!(
        "{} ({}): payoff {:.6} ± {:.6} over {} symbols, analytic {:.6} (z = {:+.2})",
        a.scheme, a.scenario, res.empirical_payoff, res.std_error, a.n, res.analytic_payoff, z
    );
    Ok(())
}

pub const LP_WEIGHT_HEADER: [&str; 4] = ["support", "weight", "entropy_bits", "score"];

pub fn lp(a: &LpArgs) -> CmdResult {
    check_out(&a.common)?;
    let src = source(&a.common)?;
    let t = a.t.map(|t| step("--t", t)).transpose()?;
    let rates = pair(rate("--r", a.r)?, rate("--rs", a.rs)?)?;
    let pmf = match (&a.pmf, t) {
        (Some(p), _) => QuantizedPmf::new(p.points.clone(), p.probs.clone())
            .map_err(|e| Failure::usage(format!("--pmf: {e}")))?,
        (None, Some(t)) => build_quantized_pmf(&src, &QuantizerSpec::centroid(t)?)?,
        (None, None) => return Err(Failure::usage("one of --t or --pmf is required")),
    };
    let candidates = enumerate_subset_candidates(&pmf, DEFAULT_K_CAP, a.mode)?;
    let sol = solve_secrecy_lp(&pmf, rates, &candidates)?;
    let row = lp_row(&pmf, &sol, rates, t, &src);

    let mut bytes = csv_bytes(&CURVE_HEADER, [row.record()])?;
    if sol.feasible {
        let active = candidates
            .iter()
            .zip(&sol.weights)
            .filter(|(_, &w)| w > 1e-12)
            .map(|(c, &w)| {
                let support: Vec<String> = c
                    .posterior
                    .iter()
                    .zip(pmf.points())
                    .filter(|(q, _)| **q > 0.0)
                    .map(|(_, x)| g12(*x))
                    .collect();
                [support.join(" "), g12(w), g12(c.entropy_bits), g12(c.score)]
            });
        bytes.push(b'\n');
        bytes.extend(csv_bytes(&LP_WEIGHT_HEADER, active)?);
    }
    emit(&a.common, &bytes)?;
    if sol.feasible {
        Ok(())
    } else {
        Err(Failure::infeasible(format!(
            "--r {} is below the quantizer entropy H(X̂) = {:.6} bits",
            a.r,
            pmf.entropy_bits()
        )))
    }
}

pub fn quantizer_stats(a: &QuantizerStatsArgs) -> CmdResult {
    check_out(&a.common)?;
    let src = source(&a.common)?;
    let t = step("--t", a.t)?;
    if let Some(bad) = a.n_mod.iter().find(|&&n| n == 0) {
        return Err(Failure::usage(format!(
            "--n-mod entries must be at least 1, got {bad}"
        )));
    }
    let table = BinTable::build(&src, &QuantizerSpec::lattice(t)?)?;
    let mut rows: Vec<(String, f64)> = vec![
        ("T".into(), table.t()),
        ("k_max".into(), table.k_max() as f64),
        ("bins".into(), table.len() as f64),
        ("H_Y_bits".into(), table.entropy_y()),
        ("H_Y_plus_log2_T_bits".into(), table.entropy_y() + t.log2()),
        ("h_X_bits".into(), src.differential_entropy_bits()),
        (
            "D_lattice".into(),
            table.bob_distortion(Reconstruction::Lattice),
        ),
        (
            "D_centroid".into(),
            table.bob_distortion(Reconstruction::Centroid),
        ),
        ("H_Y_given_abs_bits".into(), table.cond_entropy_given_abs()?),
        ("eve_mmse_given_abs".into(), table.eve_mmse_given_abs()?),
    ];
    for &n in &a.n_mod {
        rows.push((
            format!("H_Y_given_mod_{n}_bits"),
            table.cond_entropy_given_mod(n)?,
        ));
        rows.push((
            format!("eve_mmse_given_mod_{n}"),
            table.eve_mmse_given_mod(n)?,
        ));
    }
    let bytes = csv_bytes(
        &["quantity", "value"],
        rows.iter().map(|(k, v)| [k.clone(), g12(*v)]),
    )?;
    emit(&a.common, &bytes)
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let suites = a
        .suites()
        .map_err(|e| Failure::usage(format!("--suite: {e}")))?;
    let mut failed = 0;
    let mut out = String::new();
    for suite in suites {
        let report = run_suite(suite)?;
        for check in &report.checks {
            out.push_str(&format!("{suite}: {check}\n"));
            failed += usize::from(!check.passed);
        }
    }
    print!("{out}");
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::internal(format!(
            "{failed} verification check(s) failed"
        )))
    }
}

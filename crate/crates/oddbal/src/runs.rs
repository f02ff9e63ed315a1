//! Batch runners behind the subcommands. Each returns its rows plus the
//! threshold failures; rows come back in input order whatever the thread
//! count.

use num_bigint::BigInt;
use num_complex::Complex64;
use oddbal_core::asymptotics::{
    asym_report, convergence_rows, equidistribution_statistic, lemma_ratio, logconcavity_scan,
    AsymError, CountSource, LemmaForm, LogConcavityReport, MainTerm,
};
use oddbal_core::decomposition::verify_decomposition;
use oddbal_core::gf::{expand_overpartition, expand_partition, expand_v_rank, expand_v_scalar};
use oddbal_core::modular::{mordell, TransformLaw};
use oddbal_core::precise::{Arith, PreciseError};
use rayon::prelude::*;
use serde::Serialize;

use crate::grids::{DecompositionPoint, LawCase};
use crate::io::plain;

/// Default residual bound for the decomposition.
pub const DECOMPOSITION_THRESHOLD: f64 = 1e-7;
/// `h(0; 0) = 1` to this accuracy.
pub const MORDELL_ORIGIN_THRESHOLD: f64 = 1e-10;
/// Fewest significant digits accepted for asymptotic reports.
pub const MIN_DIGITS: usize = 30;

/// Default bound for a transformation law: `1e-9` for the theta and eta
/// laws, `1e-8` for the Appell and Mordell inversions.
pub fn law_threshold(law: TransformLaw) -> f64 {
    match law {
        TransformLaw::AppellInversion | TransformLaw::MordellInversion => 1e-8,
        _ => 1e-9,
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Asym(#[from] AsymError),
    #[error(transparent)]
    Precise(#[from] PreciseError),
}

/// Machine-readable record of a check that missed its threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    pub detail: String,
    pub value: String,
    pub threshold: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T> {
    pub rows: Vec<T>,
    pub failures: Vec<Failure>,
}

impl<T> Outcome<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformRow {
    pub law: String,
    pub point: String,
    #[serde(serialize_with = "plain::opt_f64")]
    pub residual: Option<f64>,
    #[serde(serialize_with = "plain::f64")]
    pub threshold: f64,
    pub pass: bool,
    pub error: Option<String>,
}

fn describe(case: &LawCase) -> String {
    let p = &case.point;
    match case.law {
        TransformLaw::EtaInversion | TransformLaw::EtaTauPlusOne => format!("tau={}", fmt_c(p.tau)),
        TransformLaw::AppellInversion => {
            format!("u={};v={};tau={}", fmt_c(p.u), fmt_c(p.v), fmt_c(p.tau))
        }
        _ => format!("z={};tau={}", fmt_c(p.z), fmt_c(p.tau)),
    }
}

/// Residual of every case. `threshold` overrides the per-law defaults.
/// With `include_origin` a final `mordell-origin` row checks `h(0; 0) = 1`.
pub fn run_transforms(
    cases: &[LawCase],
    threshold: Option<f64>,
    include_origin: bool,
) -> Outcome<TransformRow> {
    let mut rows: Vec<TransformRow> = cases
        .par_iter()
        .map(|case| {
            let bound = threshold.unwrap_or_else(|| law_threshold(case.law));
            let (residual, error) = match case.law.residual(&case.point) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            TransformRow {
                law: case.law.name().into(),
                point: describe(case),
                residual,
                threshold: bound,
                pass: residual.is_some_and(|r| r < bound),
                error,
            }
        })
        .collect();
    if include_origin {
        let bound = threshold.unwrap_or(MORDELL_ORIGIN_THRESHOLD);
        let zero = Complex64::new(0.0, 0.0);
        let (residual, error) = match mordell(zero, zero) {
            Ok(h) => (Some((h.value - 1.0).norm()), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(TransformRow {
            law: "mordell-origin".into(),
            point: "z=0;tau=0".into(),
            residual,
            threshold: bound,
            pass: residual.is_some_and(|r| r < bound),
            error,
        });
    }
    let failures = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| Failure {
            check: format!("transform:{}", r.law),
            detail: r.error.clone().unwrap_or_else(|| r.point.clone()),
            value: r.residual.map_or_else(|| "error".into(), |v| v.to_string()),
            threshold: r.threshold.to_string(),
        })
        .collect();
    Outcome { rows, failures }
}

/// Which sign of the `T1` term gates a decomposition run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum T1Sign {
    /// `(1 + 1/w) q V = T1 + T - w T2`, the identity that holds numerically.
    Plus,
    /// `(1 + 1/w) q V = -T1 + T - w T2`.
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRow {
    #[serde(serialize_with = "plain::f64")]
    pub z_re: f64,
    #[serde(serialize_with = "plain::f64")]
    pub z_im: f64,
    #[serde(serialize_with = "plain::f64")]
    pub tau_re: f64,
    #[serde(serialize_with = "plain::f64")]
    pub tau_im: f64,
    pub order: usize,
    #[serde(serialize_with = "plain::opt_f64")]
    pub lhs_re: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub lhs_im: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub lhs_tail_bound: Option<f64>,
    /// With `+T1`.
    #[serde(serialize_with = "plain::opt_f64")]
    pub residual: Option<f64>,
    /// With `-T1`.
    #[serde(serialize_with = "plain::opt_f64")]
    pub minus_t1_residual: Option<f64>,
    #[serde(serialize_with = "plain::f64")]
    pub threshold: f64,
    pub pass: bool,
    pub error: Option<String>,
}

pub fn run_decomposition(
    points: &[DecompositionPoint],
    threshold: f64,
    sign: T1Sign,
) -> Outcome<DecompositionRow> {
    let rows: Vec<DecompositionRow> = points
        .par_iter()
        .map(|p| {
            let mut row = DecompositionRow {
                z_re: p.z.re,
                z_im: p.z.im,
                tau_re: p.tau.re,
                tau_im: p.tau.im,
                order: p.order,
                lhs_re: None,
                lhs_im: None,
                lhs_tail_bound: None,
                residual: None,
                minus_t1_residual: None,
                threshold,
                pass: false,
                error: None,
            };
            match verify_decomposition(p.z, p.tau, p.order) {
                Ok(s) => {
                    row.lhs_re = Some(s.lhs.re);
                    row.lhs_im = Some(s.lhs.im);
                    row.lhs_tail_bound = Some(s.lhs_tail_bound);
                    row.residual = Some(s.residual);
                    row.minus_t1_residual = Some(s.printed_sign_residual);
                    let gated = match sign {
                        T1Sign::Plus => s.residual,
                        T1Sign::Minus => s.printed_sign_residual,
                    };
                    row.pass = gated < threshold;
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();
    let failures = rows
        .iter()
        .filter(|r| !r.pass)
        .map(|r| Failure {
            check: "decomposition".into(),
            detail: r.error.clone().unwrap_or_else(|| {
                format!(
                    "z={};tau={}",
                    fmt_c(Complex64::new(r.z_re, r.z_im)),
                    fmt_c(Complex64::new(r.tau_re, r.tau_im))
                )
            }),
            value: match sign {
                T1Sign::Plus => r.residual,
                T1Sign::Minus => r.minus_t1_residual,
            }
            .map_or_else(|| "error".into(), |v| v.to_string()),
            threshold: threshold.to_string(),
        })
        .collect();
    Outcome { rows, failures }
}

/// Which exact sequence an asymptotic report compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Sequence {
    /// `v(a, c; n)`.
    V,
    /// Overpartitions, against `e^{pi sqrt n} / (8n)`.
    Overpartition,
    /// Partitions, against the Hardy-Ramanujan term.
    Partition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymRecord {
    pub sequence: String,
    pub a: i64,
    pub c: i64,
    pub formula: String,
    pub n: usize,
    pub exact: String,
    pub main_term: Option<String>,
    pub ratio: Option<String>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub deviation: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub equidistribution: Option<f64>,
}

fn check_digits(digits: usize) -> Result<(), RunError> {
    if digits < MIN_DIGITS {
        return Err(RunError::Config(format!(
            "precision must be at least {MIN_DIGITS} digits"
        )));
    }
    Ok(())
}

fn check_residue(a: i64, c: i64) -> Result<(), RunError> {
    if c < 1 || !(0..c).contains(&a) {
        return Err(RunError::Config(format!(
            "need c >= 1 and 0 <= a < c, got a = {a}, c = {c}"
        )));
    }
    Ok(())
}

/// Exact counts against their main term at each checkpoint. Passes when
/// `|ratio - 1|` strictly decreases along the sorted checkpoints.
pub fn run_asym(
    sequence: Sequence,
    a: i64,
    c: i64,
    checkpoints: &[usize],
    allow_even: bool,
    digits: usize,
) -> Result<Outcome<AsymRecord>, RunError> {
    check_digits(digits)?;
    check_residue(a, c)?;
    if c % 2 == 0 && !allow_even {
        return Err(RunError::Config(format!(
            "modulus {c} is even; pass --allow-even to report counts only"
        )));
    }
    let mut checkpoints = checkpoints.to_vec();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let max = *checkpoints
        .last()
        .ok_or_else(|| RunError::Config("no checkpoints".into()))?;
    if sequence != Sequence::V && c != 1 {
        return Err(RunError::Config(
            "overpartition and partition reports take c = 1".into(),
        ));
    }
    let bits = Arith::with_digits(digits + 10)?.bits();
    let rows: Vec<oddbal_core::asymptotics::AsymRow> = match sequence {
        Sequence::V if c == 1 => {
            let exact = expand_v_scalar(max);
            par_rows(&checkpoints, bits, |ar, n| {
                asym_report(ar, 0, 1, &[n], CountSource::Totals(&exact), false, digits)
                    .map(|r| r.rows)
            })?
        }
        Sequence::V => {
            let table = expand_v_rank(max);
            par_rows(&checkpoints, bits, |ar, n| {
                asym_report(
                    ar,
                    a,
                    c,
                    &[n],
                    CountSource::Table(&table),
                    allow_even,
                    digits,
                )
                .map(|r| r.rows)
            })?
        }
        Sequence::Overpartition => {
            let exact = expand_overpartition(max);
            par_rows(&checkpoints, bits, |ar, n| {
                convergence_rows(ar, &exact, &[n], MainTerm::Overpartition, digits)
            })?
        }
        Sequence::Partition => {
            let exact = expand_partition(max);
            par_rows(&checkpoints, bits, |ar, n| {
                convergence_rows(ar, &exact, &[n], MainTerm::Partition, digits)
            })?
        }
    };
    let formula = match sequence {
        Sequence::V if c == 1 => MainTerm::V,
        Sequence::V if c % 2 == 1 => MainTerm::VMod { c },
        Sequence::V => MainTerm::Suppressed,
        Sequence::Overpartition => MainTerm::Overpartition,
        Sequence::Partition => MainTerm::Partition,
    };
    let name = match sequence {
        Sequence::V => "v",
        Sequence::Overpartition => "overpartition",
        Sequence::Partition => "partition",
    };
    let records: Vec<AsymRecord> = rows
        .into_iter()
        .map(|r| AsymRecord {
            sequence: name.into(),
            a,
            c,
            formula: formula.id().into(),
            n: r.n,
            exact: r.exact.to_string(),
            main_term: r.main_term,
            ratio: r.ratio_decimal,
            deviation: r.deviation,
            equidistribution: r.equidistribution,
        })
        .collect();
    let mut failures = Vec::new();
    for pair in records.windows(2) {
        if let (Some(d0), Some(d1)) = (pair[0].deviation, pair[1].deviation) {
            if d1 >= d0 {
                failures.push(Failure {
                    check: format!("asym:{name}"),
                    detail: format!(
                        "|ratio - 1| does not decrease from n = {} to n = {}",
                        pair[0].n, pair[1].n
                    ),
                    value: d1.to_string(),
                    threshold: d0.to_string(),
                });
            }
        }
    }
    Ok(Outcome {
        rows: records,
        failures,
    })
}

fn par_rows<F>(
    checkpoints: &[usize],
    bits: usize,
    f: F,
) -> Result<Vec<oddbal_core::asymptotics::AsymRow>, RunError>
where
    F: Fn(&mut Arith, usize) -> Result<Vec<oddbal_core::asymptotics::AsymRow>, AsymError> + Sync,
{
    let chunks: Vec<Result<Vec<_>, RunError>> = checkpoints
        .par_iter()
        .map(|&n| {
            let mut ar = Arith::new(bits)?;
            Ok(f(&mut ar, n)?)
        })
        .collect();
    let mut out = Vec::new();
    for chunk in chunks {
        out.extend(chunk?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquidistributionRecord {
    pub c: i64,
    pub n: usize,
    /// `max_a |c v(a,c;n) / v(n) - 1|`.
    #[serde(serialize_with = "plain::f64")]
    pub statistic: f64,
}

/// The equidistribution statistic for each modulus at each checkpoint.
/// Passes when, for every modulus, the value at the largest checkpoint is
/// below the value at the smallest.
pub fn run_equidistribution(
    moduli: &[i64],
    checkpoints: &[usize],
) -> Result<Outcome<EquidistributionRecord>, RunError> {
    if moduli.iter().any(|&c| c < 1) {
        return Err(RunError::Config("moduli must be positive".into()));
    }
    let mut checkpoints = checkpoints.to_vec();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    let max = *checkpoints
        .last()
        .ok_or_else(|| RunError::Config("no checkpoints".into()))?;
    let table = expand_v_rank(max);
    let pairs: Vec<(i64, usize)> = moduli
        .iter()
        .flat_map(|&c| checkpoints.iter().map(move |&n| (c, n)))
        .collect();
    let rows: Vec<EquidistributionRecord> = pairs
        .par_iter()
        .map(|&(c, n)| EquidistributionRecord {
            c,
            n,
            statistic: equidistribution_statistic(&table, c, n).unwrap_or(f64::NAN),
        })
        .collect();
    let mut failures = Vec::new();
    for &c in moduli {
        let of_c: Vec<&EquidistributionRecord> = rows.iter().filter(|r| r.c == c).collect();
        let (first, last) = (of_c[0], of_c[of_c.len() - 1]);
        if of_c.len() > 1 && !(last.statistic < first.statistic) {
            failures.push(Failure {
                check: format!("equidistribution:c={c}"),
                detail: format!("statistic at n = {} is not below n = {}", last.n, first.n),
                value: last.statistic.to_string(),
                threshold: first.statistic.to_string(),
            });
        }
    }
    Ok(Outcome { rows, failures })
}

/// Which left side of the log-concavity statement gates a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Reading {
    /// `v(n)^2 <= v(n-1) v(n+1)`.
    Square,
    /// `v(2n) <= v(n-1) v(n+1)`.
    Double,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogConcavityRecord {
    pub n: usize,
    pub square: bool,
    pub double: Option<bool>,
    pub upper_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogConcavitySummary {
    pub a: i64,
    pub c: i64,
    pub n_max: usize,
    pub n0_square: Option<usize>,
    pub n0_double: Option<usize>,
    pub n0_upper_bound: Option<usize>,
    pub square_failures: usize,
    pub rows: Vec<LogConcavityRecord>,
}

/// Exact counts for the scan: `v(a,c;n)` to `n_max + 1` (to `2 n_max` when
/// `c = 1`, which is cheap) and overpartitions to `n_max + 1`.
pub fn scan_inputs(a: i64, c: i64, n_max: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    let counts = if c == 1 {
        expand_v_scalar(2 * n_max.max(1))
    } else {
        expand_v_rank(n_max + 1).residue_sequence(a, c)
    };
    (counts, expand_overpartition(n_max + 1))
}

/// Both readings plus the upper bound. Passes when the chosen reading holds
/// from some `N0 <= n_max` through `n_max` and the upper bound holds on the
/// same range.
pub fn run_logconcavity(
    a: i64,
    c: i64,
    n_max: usize,
    reading: Reading,
) -> Result<(LogConcavitySummary, Vec<Failure>), RunError> {
    check_residue(a, c)?;
    if n_max < 1 {
        return Err(RunError::Config("n_max must be at least 1".into()));
    }
    let (counts, pbar) = scan_inputs(a, c, n_max);
    let report = logconcavity_scan(a, c, &counts, &pbar, n_max)?;
    let failures = logconcavity_failures(&report, reading);
    let LogConcavityReport {
        rows,
        n0_square,
        n0_double,
        n0_upper_bound,
        square_failures,
        ..
    } = report;
    Ok((
        LogConcavitySummary {
            a,
            c,
            n_max,
            n0_square,
            n0_double,
            n0_upper_bound,
            square_failures,
            rows: rows
                .into_iter()
                .map(|r| LogConcavityRecord {
                    n: r.n,
                    square: r.square,
                    double: r.double,
                    upper_bound: r.upper_bound,
                })
                .collect(),
        },
        failures,
    ))
}

pub fn logconcavity_failures(report: &LogConcavityReport, reading: Reading) -> Vec<Failure> {
    let (name, n0) = match reading {
        Reading::Square => ("square", report.n0_square),
        Reading::Double => ("double", report.n0_double),
    };
    let mut failures = Vec::new();
    let tag = format!("logconcavity:a={},c={}", report.a, report.c);
    match n0 {
        None => failures.push(Failure {
            check: format!("{tag}:{name}"),
            detail: format!("the {name} reading fails at the end of the scanned range"),
            value: "none".into(),
            threshold: report.n_max.to_string(),
        }),
        Some(n0) => {
            if report.rows.iter().any(|r| r.n >= n0 && !r.upper_bound) {
                failures.push(Failure {
                    check: format!("{tag}:upper-bound"),
                    detail: format!("upper bound fails somewhere in [{n0}, {}]", report.n_max),
                    value: report
                        .n0_upper_bound
                        .map_or_else(|| "none".into(), |v| v.to_string()),
                    threshold: n0.to_string(),
                });
            }
        }
    }
    failures
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRecord {
    #[serde(serialize_with = "plain::f64")]
    pub z: f64,
    #[serde(serialize_with = "plain::f64")]
    pub t: f64,
    pub form: String,
    pub order: Option<usize>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub v_re: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub v_im: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub main_re: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub main_im: Option<f64>,
    #[serde(serialize_with = "plain::opt_f64")]
    pub deviation: Option<f64>,
    pub error: Option<String>,
}

/// `|V / main term - 1|` for every `(z, t)`. Passes when, for every `z`, the
/// deviation at the smallest `t` is below the one at the largest.
pub fn run_lemma_ratios(zs: &[f64], ts: &[f64], form: LemmaForm) -> Outcome<LemmaRecord> {
    let form_name = match form {
        LemmaForm::Stated => "stated",
        LemmaForm::Dominant => "dominant",
    };
    let pairs: Vec<(f64, f64)> = zs
        .iter()
        .flat_map(|&z| ts.iter().map(move |&t| (z, t)))
        .collect();
    let rows: Vec<LemmaRecord> = pairs
        .par_iter()
        .map(|&(z, t)| match lemma_ratio(z, t, form) {
            Ok(r) => LemmaRecord {
                z,
                t,
                form: form_name.into(),
                order: Some(r.order),
                v_re: Some(r.v.re),
                v_im: Some(r.v.im),
                main_re: Some(r.main_term.re),
                main_im: Some(r.main_term.im),
                deviation: Some(r.deviation),
                error: None,
            },
            Err(e) => LemmaRecord {
                z,
                t,
                form: form_name.into(),
                order: None,
                v_re: None,
                v_im: None,
                main_re: None,
                main_im: None,
                deviation: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let mut failures = Vec::new();
    for &z in zs {
        let of_z: Vec<&LemmaRecord> = rows.iter().filter(|r| r.z == z).collect();
        let coarse = of_z.iter().max_by(|a, b| a.t.total_cmp(&b.t));
        let fine = of_z.iter().min_by(|a, b| a.t.total_cmp(&b.t));
        let (Some(coarse), Some(fine)) = (coarse, fine) else {
            continue;
        };
        let ok = matches!((fine.deviation, coarse.deviation), (Some(f), Some(c)) if f < c)
            || of_z.len() == 1 && fine.error.is_none();
        if !ok {
            failures.push(Failure {
                check: format!("lemma-ratio:{form_name}"),
                detail: fine
                    .error
                    .clone()
                    .or_else(|| coarse.error.clone())
                    .unwrap_or_else(|| {
                        format!(
                            "z = {z}: deviation at t = {} is not below t = {}",
                            fine.t, coarse.t
                        )
                    }),
                value: fine
                    .deviation
                    .map_or_else(|| "error".into(), |v| v.to_string()),
                threshold: coarse
                    .deviation
                    .map_or_else(|| "error".into(), |v| v.to_string()),
            });
        }
    }
    Outcome { rows, failures }
}

/// `j / c` for `j = 1..c`.
pub fn roots_of(c: i64) -> Vec<f64> {
    (1..c).map(|j| j as f64 / c as f64).collect()
}

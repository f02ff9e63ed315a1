//! Asymptotic main terms, the Tauberian transfer, exponent bookkeeping for
//! the four `z` intervals, and reports built from exact counts.
//!
//! Real main terms are computed with [`Arith`]; the lemma main terms are
//! complex `f64` values.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::gf::{evaluate_v_converged, GfError, RankTable};
use crate::modular::{mordell, q0_pow, sqrt_minus_i_tau, KernelError};
use crate::precise::{Arith, BigFloat, PreciseError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest series tail accepted in lemma ratio tests, relative to `|V|`.
pub const LEMMA_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AsymError {
    #[error("A must be positive")]
    NonPositiveA,
    #[error("n must be at least 1")]
    NonPositiveN,
    #[error("modulus {c} must be odd and greater than 1")]
    EvenOrTrivialModulus { c: i64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {a} is not in 0..{c}")]
    ResidueOutOfRange { a: i64, c: i64 },
    #[error("z = {z} is not inside one of (0,1/4), (1/4,1/2), (1/2,3/4), (3/4,1)")]
    OutsideIntervals { z: f64 },
    #[error("tau must be purely imaginary with positive imaginary part")]
    NotImaginaryAxis,
    #[error("n = {n} lies beyond the available counts (max {max_n})")]
    BeyondTable { n: usize, max_n: usize },
    #[error("modulus {c} needs a rank table; only totals were given")]
    NeedsTable { c: i64 },
    #[error("series tail {bound:e} exceeds {LEMMA_TAIL_TOLERANCE:e} of |V| = {value:e}")]
    TailTooLarge { bound: f64, value: f64 },
    #[error(transparent)]
    Precise(#[from] PreciseError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Series(#[from] GfError),
}

fn positive(x: &BigFloat) -> bool {
    !x.is_zero() && x.is_positive() && Arith::is_finite(x)
}

/// `lambda A^{alpha/2 + 1/4} / (2 sqrt(pi) n^{alpha/2 + 3/4}) * exp(2 sqrt(A n))`,
/// the coefficient asymptotic that the Tauberian theorem attaches to a
/// generating function behaving like `lambda t^alpha e^{A/t}` as `t -> 0`.
/// Powers go through `exp` and `ln`.
pub fn tauberian_apply(
    ar: &mut Arith,
    lambda: &BigFloat,
    alpha: &BigFloat,
    a: &BigFloat,
    n: u64,
) -> Result<BigFloat, AsymError> {
    if !positive(a) {
        return Err(AsymError::NonPositiveA);
    }
    if n == 0 {
        return Err(AsymError::NonPositiveN);
    }
    let nf = ar.int(n as i64);
    let half_alpha = ar.div(alpha, &ar.int(2));
    let a_power = ar.add(&half_alpha, &ar.ratio(1, 4));
    let n_power = ar.add(&half_alpha, &ar.ratio(3, 4));
    let a_term = ar.powf(a, &a_power);
    let num = ar.mul(lambda, &a_term);
    let pi = ar.pi();
    let n_term = ar.powf(&nf, &n_power);
    let den = ar.mul(&ar.mul(&ar.int(2), &ar.sqrt(&pi)), &n_term);
    let exponent = ar.mul(&ar.int(2), &ar.sqrt(&ar.mul(a, &nf)));
    let growth = ar.exp(&exponent);
    Ok(ar.mul(&ar.div(&num, &den), &growth))
}

/// `(lambda, alpha, A) = (sqrt(2)/8, 0, pi^2/4)`, the parameters for
/// `T(1; e^{-t}) / 2`.
pub fn tauberian_v_parameters(ar: &mut Arith) -> (BigFloat, BigFloat, BigFloat) {
    let lambda = ar.div(&ar.sqrt(&ar.int(2)), &ar.int(8));
    let pi = ar.pi();
    let a = ar.div(&ar.mul(&pi, &pi), &ar.int(4));
    (lambda, ar.int(0), a)
}

/// `e^{pi sqrt(n)} / (16 n^{3/4})`, with `n^{3/4} = sqrt(n) sqrt(sqrt(n))`.
pub fn main_term_v(ar: &mut Arith, n: u64) -> Result<BigFloat, AsymError> {
    if n == 0 {
        return Err(AsymError::NonPositiveN);
    }
    let root = ar.sqrt(&ar.int(n as i64));
    let pi = ar.pi();
    let growth = ar.exp(&ar.mul(&pi, &root));
    let den = ar.mul(&ar.int(16), &ar.mul(&root, &ar.sqrt(&root)));
    Ok(ar.div(&growth, &den))
}

fn check_odd_modulus(a: i64, c: i64) -> Result<(), AsymError> {
    if c <= 1 || c % 2 == 0 {
        return Err(AsymError::EvenOrTrivialModulus { c });
    }
    if !(0..c).contains(&a) {
        return Err(AsymError::ResidueOutOfRange { a, c });
    }
    Ok(())
}

/// `main_term_v(n) / c` for odd `c > 1`; the same for every residue `a`.
pub fn main_term_v_mod(ar: &mut Arith, a: i64, c: i64, n: u64) -> Result<BigFloat, AsymError> {
    check_odd_modulus(a, c)?;
    let m = main_term_v(ar, n)?;
    Ok(ar.div(&m, &ar.int(c)))
}

/// `e^{pi sqrt(n)} / (8 n)`.
pub fn overpartition_asym(ar: &mut Arith, n: u64) -> Result<BigFloat, AsymError> {
    if n == 0 {
        return Err(AsymError::NonPositiveN);
    }
    let nf = ar.int(n as i64);
    let pi = ar.pi();
    let growth = ar.exp(&ar.mul(&pi, &ar.sqrt(&nf)));
    Ok(ar.div(&growth, &ar.mul(&ar.int(8), &nf)))
}

/// `e^{pi sqrt(2n/3)} / (4 sqrt(3) n)`.
pub fn hardy_ramanujan_p(ar: &mut Arith, n: u64) -> Result<BigFloat, AsymError> {
    if n == 0 {
        return Err(AsymError::NonPositiveN);
    }
    let nf = ar.int(n as i64);
    let pi = ar.pi();
    let inner = ar.sqrt(&ar.mul(&ar.ratio(2, 3), &nf));
    let growth = ar.exp(&ar.mul(&pi, &inner));
    let den = ar.mul(&ar.mul(&ar.int(4), &ar.sqrt(&ar.int(3))), &nf);
    Ok(ar.div(&growth, &den))
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `c2 z^2 + c1 z + c0` on the open interval `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPolynomial {
    pub c2: BigRational,
    pub c1: BigRational,
    pub c0: BigRational,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl ExponentPolynomial {
    fn new(c: [(i64, i64); 3], lo: (i64, i64), hi: (i64, i64)) -> Self {
        Self {
            c2: rat(c[0].0, c[0].1),
            c1: rat(c[1].0, c[1].1),
            c0: rat(c[2].0, c[2].1),
            lo: rat(lo.0, lo.1),
            hi: rat(hi.0, hi.1),
        }
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        &self.c2 * z * z + &self.c1 * z + &self.c0
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
        f(&self.c2) * z * z + f(&self.c1) * z + f(&self.c0)
    }

    /// Strictly inside the interval.
    pub fn contains(&self, z: &BigRational) -> bool {
        &self.lo < z && z < &self.hi
    }
}

/// Which exponent polynomials to use for the four `z` intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolynomialSet {
    /// `z^2/2 - 1/16` on `(0,1/4)` and `(1/4,1/2)`, `z/2 - z^2/2 - 1/8` on
    /// `(1/2,3/4)`, `z^2/2 - z + 7/16` on `(3/4,1)`.
    Stated,
    /// The exponents of the dominant terms measured numerically; they differ
    /// from [`PolynomialSet::Stated`] only on `(1/4,1/2)`, where the dominant
    /// exponent is `-(1/2 - z)^2 / 2`.
    Dominant,
}

pub fn exponent_polynomials(set: PolynomialSet) -> [ExponentPolynomial; 4] {
    let low = ExponentPolynomial::new([(1, 2), (0, 1), (-1, 16)], (0, 1), (1, 4));
    let second = match set {
        PolynomialSet::Stated => {
            ExponentPolynomial::new([(1, 2), (0, 1), (-1, 16)], (1, 4), (1, 2))
        }
        PolynomialSet::Dominant => {
            ExponentPolynomial::new([(-1, 2), (1, 2), (-1, 8)], (1, 4), (1, 2))
        }
    };
    [
        low,
        second,
        ExponentPolynomial::new([(-1, 2), (1, 2), (-1, 8)], (1, 2), (3, 4)),
        ExponentPolynomial::new([(1, 2), (-1, 1), (7, 16)], (3, 4), (1, 1)),
    ]
}

/// `f(j/c) + 1/16` for `j = 1..c`, where `f` is the polynomial of the interval
/// containing `j/c`.
pub fn exponent_gap_terms(
    c: i64,
    set: PolynomialSet,
) -> Result<Vec<(i64, BigRational)>, AsymError> {
    check_odd_modulus(0, c)?;
    let polys = exponent_polynomials(set);
    let critical = rat(1, 16);
    (1..c)
        .map(|j| {
            let z = rat(j, c);
            let p = polys
                .iter()
                .find(|p| p.contains(&z))
                .ok_or(AsymError::OutsideIntervals {
                    z: j as f64 / c as f64,
                })?;
            Ok((j, p.eval(&z) + &critical))
        })
        .collect()
}

/// `min_j f(j/c) + 1/16` over `j = 1..c`; positive means every nontrivial
/// root of unity contributes less than the critical exponent `-1/16`.
pub fn exponent_gap(c: i64) -> Result<BigRational, AsymError> {
    exponent_gap_with(c, PolynomialSet::Stated)
}

pub fn exponent_gap_with(c: i64, set: PolynomialSet) -> Result<BigRational, AsymError> {
    let terms = exponent_gap_terms(c, set)?;
    Ok(terms
        .into_iter()
        .map(|(_, g)| g)
        .min()
        .expect("odd c > 1 has at least two terms"))
}

/// Index 2..=5 of the interval containing `z`: `(0,1/4)`, `(1/4,1/2)`,
/// `(1/2,3/4)`, `(3/4,1)`.
pub fn lemma_interval(z: f64) -> Result<u8, AsymError> {
    match z {
        z if z > 0.0 && z < 0.25 => Ok(2),
        z if z > 0.25 && z < 0.5 => Ok(3),
        z if z > 0.5 && z < 0.75 => Ok(4),
        z if z > 0.75 && z < 1.0 => Ok(5),
        _ => Err(AsymError::OutsideIntervals { z }),
    }
}

fn check_axis(tau: Complex64) -> Result<(), AsymError> {
    if tau.re == 0.0 && tau.im > 0.0 {
        Ok(())
    } else {
        Err(AsymError::NotImaginaryAxis)
    }
}

/// `w^{-1/2} / (1 + w^{-1})` with `w = e^{2 pi i z}`.
fn prefactor(z: f64) -> Complex64 {
    let w_inv = (-2.0 * PI * I * z).exp();
    (-PI * I * z).exp() / (1.0 + w_inv)
}

/// The main term for `V(e^{2 pi i z}; q)` as `tau -> 0`, in the form stated for
/// each of the four intervals:
///
/// * `(0,1/4)`: `(sqrt2/4) P q0^{z^2/2 - 1/16} h(2z; 2tau)`
/// * `(1/4,1/2)`: `-(sqrt2/4) P h(3/4 - z; 2tau) q0^{z^2/2 - 1/16}`
/// * `(1/2,3/4)`: `-P q0^{-z^2/2 + z/2 - 1/8} / sqrt(-i tau)`
/// * `(3/4,1)`: `-(sqrt2/4) P h(z - 3/4; 2tau) q0^{z^2/2 - z + 7/16}`
///
/// with `P = w^{-1/2}/(1 + w^{-1})`.
pub fn lemma_main_term(z: f64, tau: Complex64) -> Result<Complex64, AsymError> {
    check_axis(tau)?;
    let p = prefactor(z);
    let s = 2f64.sqrt() / 4.0;
    let two_tau = 2.0 * tau;
    let zc = Complex64::new(z, 0.0);
    Ok(match lemma_interval(z)? {
        2 => s * p * q0_pow(tau, z * z / 2.0 - 1.0 / 16.0) * mordell(2.0 * zc, two_tau)?.value,
        3 => -s * p * mordell(0.75 - zc, two_tau)?.value * q0_pow(tau, z * z / 2.0 - 1.0 / 16.0),
        4 => -p * q0_pow(tau, -z * z / 2.0 + z / 2.0 - 0.125) / sqrt_minus_i_tau(tau),
        _ => {
            -s * p * mordell(zc - 0.75, two_tau)?.value * q0_pow(tau, z * z / 2.0 - z + 7.0 / 16.0)
        }
    })
}

/// The dominant term of `V(e^{2 pi i z}; q)` as found numerically. With
/// `y = min(z, 1 - z)` and `P = prefactor at y`:
///
/// * `y < 1/4`: `(sqrt2/4) P q0^{y^2/2 - 1/16} h(2y; 2tau)`
/// * `1/4 < y < 1/2`: `P q0^{-(1/2 - y)^2/2} / (2 sqrt(-i tau))`
///
/// It agrees with [`lemma_main_term`] on `(0,1/4)`, is half of it on
/// `(1/2,3/4)` and differs in form on the other two intervals.
pub fn dominant_main_term(z: f64, tau: Complex64) -> Result<Complex64, AsymError> {
    check_axis(tau)?;
    lemma_interval(z)?;
    let y = z.min(1.0 - z);
    let p = prefactor(y);
    if y < 0.25 {
        let h = mordell(Complex64::new(2.0 * y, 0.0), 2.0 * tau)?.value;
        Ok(2f64.sqrt() / 4.0 * p * q0_pow(tau, y * y / 2.0 - 1.0 / 16.0) * h)
    } else {
        let d = 0.5 - y;
        Ok(p * q0_pow(tau, -d * d / 2.0) / (2.0 * sqrt_minus_i_tau(tau)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaForm {
    Stated,
    Dominant,
}

/// `V(e^{2 pi i z}; e^{-2 pi t})` against a main term at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaRatioRow {
    pub z: f64,
    pub t: f64,
    /// Series order at which the value settled.
    pub order: usize,
    pub v: Complex64,
    pub main_term: Complex64,
    /// `|V / main_term - 1|`.
    pub deviation: f64,
    pub tail_bound: f64,
}

pub fn lemma_ratio(z: f64, t: f64, form: LemmaForm) -> Result<LemmaRatioRow, AsymError> {
    let tau = Complex64::new(0.0, t);
    let main_term = match form {
        LemmaForm::Stated => lemma_main_term(z, tau)?,
        LemmaForm::Dominant => dominant_main_term(z, tau)?,
    };
    let w = (2.0 * PI * I * z).exp();
    let q = Complex64::new((-2.0 * PI * t).exp(), 0.0);
    let (v, order) = evaluate_v_converged(w, q, 1e-12)?;
    if v.truncation_bound > LEMMA_TAIL_TOLERANCE * v.value.norm() {
        return Err(AsymError::TailTooLarge {
            bound: v.truncation_bound,
            value: v.value.norm(),
        });
    }
    Ok(LemmaRatioRow {
        z,
        t,
        order,
        v: v.value,
        main_term,
        deviation: (v.value / main_term - 1.0).norm(),
        tail_bound: v.truncation_bound,
    })
}

/// Which closed form a report compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainTerm {
    /// `e^{pi sqrt n} / (16 n^{3/4})`.
    V,
    /// The same divided by an odd modulus `c > 1`.
    VMod { c: i64 },
    /// `e^{pi sqrt n} / (8n)`.
    Overpartition,
    /// `e^{pi sqrt(2n/3)} / (4 sqrt3 n)`.
    Partition,
    /// No main term (even moduli).
    Suppressed,
}

impl MainTerm {
    pub fn id(self) -> &'static str {
        match self {
            MainTerm::V => "v",
            MainTerm::VMod { .. } => "v-mod",
            MainTerm::Overpartition => "overpartition",
            MainTerm::Partition => "partition",
            MainTerm::Suppressed => "none",
        }
    }

    pub fn evaluate(self, ar: &mut Arith, n: u64) -> Result<Option<BigFloat>, AsymError> {
        Ok(Some(match self {
            MainTerm::V => main_term_v(ar, n)?,
            MainTerm::VMod { c } => main_term_v_mod(ar, 0, c, n)?,
            MainTerm::Overpartition => overpartition_asym(ar, n)?,
            MainTerm::Partition => hardy_ramanujan_p(ar, n)?,
            MainTerm::Suppressed => return Ok(None),
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymRow {
    pub n: usize,
    pub exact: BigInt,
    /// Plain decimal string of the main term.
    pub main_term: Option<String>,
    /// `exact / main_term`.
    pub ratio: Option<f64>,
    /// The same ratio as a plain decimal string.
    pub ratio_decimal: Option<String>,
    /// `|ratio - 1|`.
    pub deviation: Option<f64>,
    /// `max_a |c v(a,c;n) / v(n) - 1|`, when every residue class is known.
    pub equidistribution: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticReport {
    pub a: i64,
    pub c: i64,
    pub formula: &'static str,
    pub rows: Vec<AsymRow>,
}

/// Rows `(n, exact[n], main term, ratio)` for each checkpoint. Main terms are
/// printed with `digits` significant digits.
pub fn convergence_rows(
    ar: &mut Arith,
    exact: &[BigInt],
    checkpoints: &[usize],
    main: MainTerm,
    digits: usize,
) -> Result<Vec<AsymRow>, AsymError> {
    let max_n = exact.len().saturating_sub(1);
    checkpoints
        .iter()
        .map(|&n| {
            let value = exact
                .get(n)
                .ok_or(AsymError::BeyondTable { n, max_n })?
                .clone();
            let (main_term, ratio, ratio_decimal) = match main.evaluate(ar, n as u64)? {
                Some(m) => {
                    let ex = ar.from_bigint(&value);
                    let r = ar.div(&ex, &m);
                    (
                        Some(ar.to_decimal(&m, digits)?),
                        Some(ar.to_f64(&r)?),
                        Some(ar.to_decimal(&r, digits)?),
                    )
                }
                None => (None, None, None),
            };
            Ok(AsymRow {
                n,
                exact: value,
                main_term,
                ratio,
                ratio_decimal,
                deviation: ratio.map(|r| (r - 1.0).abs()),
                equidistribution: None,
            })
        })
        .collect()
}

/// `max_a |c v(a,c;n) / v(n) - 1|`.
pub fn equidistribution_statistic(table: &RankTable, c: i64, n: usize) -> Option<f64> {
    if c < 1 {
        return None;
    }
    let total = table.total(n)?;
    if total.is_zero() {
        return None;
    }
    (0..c)
        .map(|a| {
            let class = table.residue_count(a, c, n)?;
            let num = (BigInt::from(c) * class - &total).abs();
            BigRational::new(num, total.clone()).to_f64()
        })
        .try_fold(0.0f64, |m, x| x.map(|x| m.max(x)))
}

/// Where the exact counts of a report come from.
#[derive(Debug, Clone, Copy)]
pub enum CountSource<'a> {
    /// Full rank table, any modulus.
    Table(&'a RankTable),
    /// `v(n)` only; enough for `c = 1`.
    Totals(&'a [BigInt]),
}

/// Exact `v(a,c;n)` against the main term at each checkpoint, plus the
/// equidistribution statistic when a table is available. Even `c` is
/// rejected unless `allow_even` is set, in which case the main-term columns
/// stay empty.
pub fn asym_report(
    ar: &mut Arith,
    a: i64,
    c: i64,
    checkpoints: &[usize],
    source: CountSource<'_>,
    allow_even: bool,
    digits: usize,
) -> Result<AsymptoticReport, AsymError> {
    if c < 1 {
        return Err(AsymError::ZeroModulus);
    }
    if !(0..c).contains(&a) {
        return Err(AsymError::ResidueOutOfRange { a, c });
    }
    let main = match c {
        1 => MainTerm::V,
        c if c % 2 == 1 => MainTerm::VMod { c },
        c if allow_even => {
            let _ = c;
            MainTerm::Suppressed
        }
        c => return Err(AsymError::EvenOrTrivialModulus { c }),
    };
    let exact = match source {
        CountSource::Table(t) => t.residue_sequence(a, c),
        CountSource::Totals(v) if c == 1 => v.to_vec(),
        CountSource::Totals(_) => return Err(AsymError::NeedsTable { c }),
    };
    let mut rows = convergence_rows(ar, &exact, checkpoints, main, digits)?;
    if let CountSource::Table(t) = source {
        for row in &mut rows {
            row.equidistribution = equidistribution_statistic(t, c, row.n);
        }
    }
    Ok(AsymptoticReport {
        a,
        c,
        formula: main.id(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LogConcavityRow {
    pub n: usize,
    /// `v(n)^2 <= v(n-1) v(n+1)`.
    pub square: bool,
    /// `v(2n) <= v(n-1) v(n+1)`, when `2n` is covered.
    pub double: Option<bool>,
    /// `v(n-1) v(n+1) < sqrt(n) pbar(n-1) pbar(n+1)`.
    pub upper_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConcavityReport {
    pub a: i64,
    pub c: i64,
    pub n_max: usize,
    pub rows: Vec<LogConcavityRow>,
    /// Least `N0` with the square reading holding for all `N0 <= n <= n_max`.
    pub n0_square: Option<usize>,
    /// The same for the `v(2n)` reading over the `n` where it is defined.
    pub n0_double: Option<usize>,
    pub n0_upper_bound: Option<usize>,
    /// Number of `n` at which the square reading fails.
    pub square_failures: usize,
}

fn least_tail_start(
    rows: &[LogConcavityRow],
    holds: impl Fn(&LogConcavityRow) -> Option<bool>,
) -> Option<usize> {
    let mut start = None;
    for row in rows.iter().rev() {
        match holds(row) {
            Some(true) => start = Some(row.n),
            Some(false) => break,
            None => {}
        }
    }
    start
}

/// Scans `1 <= n <= n_max` for both readings of the log-concavity statement
/// about `v(a,c;n)` and for the overpartition upper bound. `counts[n]` is
/// `v(a,c;n)` and must extend to `n_max + 1`, as must `overpartitions`.
pub fn logconcavity_scan(
    a: i64,
    c: i64,
    counts: &[BigInt],
    overpartitions: &[BigInt],
    n_max: usize,
) -> Result<LogConcavityReport, AsymError> {
    let available = counts.len().min(overpartitions.len());
    if available < n_max + 2 {
        return Err(AsymError::BeyondTable {
            n: n_max + 1,
            max_n: available.saturating_sub(1),
        });
    }
    let rows: Vec<LogConcavityRow> = (1..=n_max)
        .map(|n| {
            let product = &counts[n - 1] * &counts[n + 1];
            let square = &counts[n] * &counts[n] <= product;
            let double = counts.get(2 * n).map(|d| d <= &product);
            // compare squares to avoid the irrational sqrt(n)
            let pbar = &overpartitions[n - 1] * &overpartitions[n + 1];
            let upper_bound = &product * &product < BigInt::from(n) * &pbar * &pbar;
            LogConcavityRow {
                n,
                square,
                double,
                upper_bound,
            }
        })
        .collect();
    Ok(LogConcavityReport {
        a,
        c,
        n_max,
        n0_square: least_tail_start(&rows, |r| Some(r.square)),
        n0_double: least_tail_start(&rows, |r| r.double),
        n0_upper_bound: least_tail_start(&rows, |r| Some(r.upper_bound)),
        square_failures: rows.iter().filter(|r| !r.square).count(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{expand_overpartition, expand_partition, expand_v_rank, expand_v_scalar};
    use crate::precise::DEFAULT_PRECISION_BITS;
    use alloc::vec;

    fn arith() -> Arith {
        Arith::new(DEFAULT_PRECISION_BITS).unwrap()
    }

    fn rel(ar: &mut Arith, a: &BigFloat, b: &BigFloat) -> f64 {
        let d = ar.relative_difference(a, b);
        ar.to_f64(&d).unwrap()
    }

    #[test]
    fn tauberian_reproduces_main_term() {
        let mut ar = arith();
        let (lambda, alpha, a) = tauberian_v_parameters(&mut ar);
        for n in [1, 10, 1000] {
            let t = tauberian_apply(&mut ar, &lambda, &alpha, &a, n).unwrap();
            let m = main_term_v(&mut ar, n).unwrap();
            assert!(rel(&mut ar, &t, &m) < 1e-60, "n = {n}");
        }
        let zero = ar.int(0);
        assert_eq!(
            tauberian_apply(&mut ar, &lambda, &alpha, &zero, 4),
            Err(AsymError::NonPositiveA)
        );
    }

    #[test]
    fn tauberian_second_path() {
        // (1, 0, pi^2/4) at n = 4: e^{2 pi} (pi^2/4)^{1/4} / (2 sqrt(pi) 4^{3/4})
        let mut ar = arith();
        let pi = ar.pi();
        let a = ar.div(&ar.mul(&pi, &pi), &ar.int(4));
        let (one, zero) = (ar.int(1), ar.int(0));
        let t = tauberian_apply(&mut ar, &one, &zero, &a, 4).unwrap();
        let expected =
            (2.0 * PI).exp() * (PI * PI / 4.0).powf(0.25) / (2.0 * PI.sqrt() * 4f64.powf(0.75));
        assert!((ar.to_f64(&t).unwrap() / expected - 1.0).abs() < 1e-14);
        let mut previous = 0.0;
        for n in 1..30 {
            let t = tauberian_apply(&mut ar, &one, &zero, &a, n).unwrap();
            let v = ar.to_f64(&t).unwrap();
            assert!(v > previous);
            previous = v;
        }
    }

    #[test]
    fn main_term_identities() {
        let mut ar = arith();
        for n in [1, 7, 100, 10_000] {
            let m = main_term_v(&mut ar, n).unwrap();
            let o = overpartition_asym(&mut ar, n).unwrap();
            let quarter = ar.sqrt(&ar.sqrt(&ar.int(n as i64)));
            let other = ar.div(&ar.mul(&quarter, &o), &ar.int(2));
            assert!(rel(&mut ar, &m, &other) < 1e-70);
        }
        let m3 = main_term_v_mod(&mut ar, 0, 3, 50).unwrap();
        let m = main_term_v(&mut ar, 50).unwrap();
        let tripled = ar.mul(&m3, &ar.int(3));
        assert!(rel(&mut ar, &tripled, &m) < 1e-70);
        let a = main_term_v_mod(&mut ar, 1, 5, 50).unwrap();
        let b = main_term_v_mod(&mut ar, 4, 5, 50).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            main_term_v_mod(&mut ar, 0, 2, 50),
            Err(AsymError::EvenOrTrivialModulus { c: 2 })
        );
        assert!(main_term_v(&mut ar, 0).is_err());
    }

    #[test]
    fn exponent_gaps() {
        let terms = exponent_gap_terms(3, PolynomialSet::Stated).unwrap();
        assert_eq!(terms, vec![(1, rat(1, 18)), (2, rat(7, 144))]);
        assert_eq!(exponent_gap(3).unwrap(), rat(7, 144));
        assert_eq!(
            exponent_gap_with(3, PolynomialSet::Dominant).unwrap(),
            rat(7, 144)
        );
        for c in (3..=99).step_by(2) {
            assert!(exponent_gap(c).unwrap() > BigRational::zero(), "c = {c}");
            assert!(exponent_gap_with(c, PolynomialSet::Dominant).unwrap() > BigRational::zero());
        }
        assert!(exponent_gap(4).is_err());
    }

    #[test]
    fn interval_dispatch() {
        assert_eq!(lemma_interval(0.15).unwrap(), 2);
        assert_eq!(lemma_interval(1.0 / 3.0).unwrap(), 3);
        assert_eq!(lemma_interval(0.6).unwrap(), 4);
        assert_eq!(lemma_interval(0.9).unwrap(), 5);
        for z in [0.0, 0.25, 0.5, 0.75, 1.0] {
            assert!(lemma_interval(z).is_err());
        }
        assert!(lemma_main_term(0.3, Complex64::new(0.1, 0.1)).is_err());
    }

    #[test]
    fn stated_and_dominant_forms_relate() {
        let tau = Complex64::new(0.0, 0.07);
        for z in [0.1, 0.2] {
            let a = lemma_main_term(z, tau).unwrap();
            let b = dominant_main_term(z, tau).unwrap();
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
        let a = lemma_main_term(0.6, tau).unwrap();
        let b = dominant_main_term(0.6, tau).unwrap();
        assert!((a - 2.0 * b).norm() < 1e-12 * a.norm());
        // Lemma 3.2's exponent at z = 0.15 is z^2/2 - 1/16
        let p = &exponent_polynomials(PolynomialSet::Stated)[0];
        assert!((p.eval_f64(0.15) - (0.15f64.powi(2) / 2.0 - 1.0 / 16.0)).abs() < 1e-16);
    }

    #[test]
    fn dominant_terms_track_the_series() {
        for z in [0.2, 0.4, 0.8] {
            let coarse = lemma_ratio(z, 0.1, LemmaForm::Dominant).unwrap();
            let fine = lemma_ratio(z, 0.05, LemmaForm::Dominant).unwrap();
            assert!(fine.deviation < coarse.deviation, "z = {z}");
        }
    }

    #[test]
    fn convergence_for_small_counts() {
        let mut ar = arith();
        let v = expand_v_scalar(400);
        let rows = convergence_rows(&mut ar, &v, &[25, 100, 400], MainTerm::V, 50).unwrap();
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
        let p = expand_partition(400);
        let rows = convergence_rows(&mut ar, &p, &[25, 100, 400], MainTerm::Partition, 50).unwrap();
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
        let pb = expand_overpartition(400);
        let rows =
            convergence_rows(&mut ar, &pb, &[25, 100, 400], MainTerm::Overpartition, 50).unwrap();
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
        assert!(convergence_rows(&mut ar, &v, &[401], MainTerm::V, 50).is_err());
    }

    #[test]
    fn reports() {
        let mut ar = arith();
        let t = expand_v_rank(40);
        let r = asym_report(&mut ar, 0, 1, &[2], CountSource::Table(&t), false, 40).unwrap();
        assert_eq!(r.rows[0].exact, BigInt::from(5));
        assert_eq!(r.formula, "v");
        assert!(r.rows[0]
            .main_term
            .as_ref()
            .unwrap()
            .starts_with("3.1595633273375"));
        let r3 = asym_report(&mut ar, 1, 3, &[10, 40], CountSource::Table(&t), false, 40).unwrap();
        assert!(r3.rows.iter().all(|row| row.equidistribution.is_some()));
        assert!(asym_report(&mut ar, 0, 2, &[10], CountSource::Table(&t), false, 40).is_err());
        let even = asym_report(&mut ar, 1, 2, &[10], CountSource::Table(&t), true, 40).unwrap();
        assert!(even.rows[0].main_term.is_none() && even.rows[0].ratio.is_none());
        let totals = t.totals();
        assert!(asym_report(
            &mut ar,
            0,
            3,
            &[10],
            CountSource::Totals(&totals),
            false,
            40
        )
        .is_err());
        assert_eq!(equidistribution_statistic(&t, 1, 7), Some(0.0));
    }

    #[test]
    fn logconcavity_small_window() {
        let v = expand_v_scalar(40);
        let pb = expand_overpartition(40);
        let r = logconcavity_scan(0, 1, &v, &pb, 39).unwrap();
        // v(1)^2 = 4 <= v(0) v(2) = 5
        assert!(r.rows[0].square);
        assert_eq!(r.rows.len(), 39);
        assert!(logconcavity_scan(0, 1, &v, &pb, 40).is_err());
    }
}

//! Exact expansions of the rank generating function
//!
//! `V(w; q) = sum_{n>=0} (-wq, -q/w; q)_n q^n / (q; q^2)_{n+1}`
//!
//! and of the overpartition and partition generating functions.
//!
//! The coefficient of `w^m q^n` in `V` is `v(m, n)`, the number of
//! odd-balanced unimodal sequences of size `2n + 2` and rank `m`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
// f64 math without std; shadowed by the inherent methods in test builds
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::laurent::Laurent;
use crate::modular::EvalResult;
use crate::ring::Ring;
use crate::series::{
    div_one_minus_monomial_in, mul_one_plus_monomial_in, pochhammer, Length, TruncatedSeries,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GfError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {a} is not in 0..{c}")]
    ResidueOutOfRange { a: i64, c: i64 },
    #[error("root index {j} is not in 0..{c}")]
    RootOutOfRange { j: i64, c: i64 },
    #[error("orthogonality sum at n = {n} is not a rational integer divisible by the modulus")]
    NotRationalInteger { n: usize },
    #[error("n = {n} lies beyond the table (max {max_n})")]
    BeyondTable { n: usize, max_n: usize },
    #[error("|q| = {abs_q} must be below 1")]
    OutsideDisc { abs_q: f64 },
    #[error("series did not reach the requested accuracy by order {order}")]
    NoConvergence { order: usize },
}

/// Expands `V(w; q)` to order `order` in any ring containing `w` and its
/// inverse.
pub fn expand_v<R: Ring>(w: &R, w_inv: &R, order: usize) -> TruncatedSeries<R> {
    let ctx = w.context();
    let one = R::one_in(&ctx);
    // term n before the q^n shift; n = 0 gives 1/(1 - q)
    let mut term: Vec<R> = (0..=order).map(|_| one.clone()).collect();
    let mut sum = term.clone();
    for n in 1..=order {
        term.truncate(order - n + 1);
        mul_one_plus_monomial_in(&mut term, w, n);
        mul_one_plus_monomial_in(&mut term, w_inv, n);
        div_one_minus_monomial_in(&mut term, &one, 2 * n + 1);
        for (k, t) in term.iter().enumerate() {
            sum[k + n].add_assign_ref(t);
        }
    }
    TruncatedSeries::from_coeffs(&ctx, sum, order)
}

/// Exact table of `v(m, n)` for `n <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    rows: Vec<Laurent>,
}

impl RankTable {
    /// Builds a table from one Laurent polynomial in `w` per `n`.
    ///
    /// # Panics
    /// If `rows` is empty.
    pub fn from_rows(rows: Vec<Laurent>) -> Self {
        assert!(!rows.is_empty(), "a rank table has at least the n = 0 row");
        Self { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `sum_m v(m, n) w^m`.
    pub fn row(&self, n: usize) -> Option<&Laurent> {
        self.rows.get(n)
    }

    pub fn rows(&self) -> &[Laurent] {
        &self.rows
    }

    /// `v(m, n)`, zero beyond the table.
    pub fn count(&self, m: i64, n: usize) -> BigInt {
        self.rows.get(n).map_or_else(BigInt::zero, |r| r.coeff(m))
    }

    /// `v(n) = sum_m v(m, n)`.
    pub fn total(&self, n: usize) -> Option<BigInt> {
        self.rows.get(n).map(Laurent::eval_at_one)
    }

    pub fn totals(&self) -> Vec<BigInt> {
        self.rows.iter().map(Laurent::eval_at_one).collect()
    }

    /// `v(a, c; n)`: sequences whose rank is congruent to `a` mod `c`.
    pub fn residue_count(&self, a: i64, c: i64, n: usize) -> Option<BigInt> {
        let c = c.max(1);
        self.rows.get(n).map(|r| r.residue_sum(a, c))
    }

    /// `v(a, c; n)` for `n = 0..=max_n`.
    pub fn residue_sequence(&self, a: i64, c: i64) -> Vec<BigInt> {
        let c = c.max(1);
        self.rows.iter().map(|r| r.residue_sum(a, c)).collect()
    }

    /// Nonzero entries `(n, m, v(m, n))` ordered by `n`, then `m`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64, &BigInt)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| row.terms().map(move |(m, c)| (n, m, c)))
    }

    /// The same table cut to `n <= max_n`.
    pub fn truncated(&self, max_n: usize) -> Self {
        Self {
            rows: self.rows[..=max_n.min(self.max_n())].to_vec(),
        }
    }
}

/// `V(w; q)` with full rank tracking, to `q^max_n`.
pub fn expand_v_rank(max_n: usize) -> RankTable {
    let w = Laurent::monomial(BigInt::one(), 1);
    let w_inv = Laurent::monomial(BigInt::one(), -1);
    RankTable::from_rows(expand_v(&w, &w_inv, max_n).into_coeffs())
}

/// `v(n)`, the coefficients of `V(1; q)`, to `q^max_n`.
pub fn expand_v_scalar(max_n: usize) -> Vec<BigInt> {
    let one = BigInt::one();
    expand_v(&one, &one, max_n).into_coeffs()
}

fn check_modulus(c: i64) -> Result<usize, GfError> {
    usize::try_from(c)
        .ok()
        .filter(|&c| c >= 1)
        .ok_or(GfError::ZeroModulus)
}

/// `V(zeta_c^j; q)` expanded directly in the cyclotomic ring of order `c`.
pub fn expand_v_at_root(
    j: i64,
    c: i64,
    order: usize,
) -> Result<TruncatedSeries<Cyclotomic>, GfError> {
    let cu = check_modulus(c)?;
    if !(0..c).contains(&j) {
        return Err(GfError::RootOutOfRange { j, c });
    }
    let w = Cyclotomic::root_power(cu, j);
    let w_inv = Cyclotomic::root_power(cu, -j);
    Ok(expand_v(&w, &w_inv, order))
}

/// Image of a rank table under `w -> zeta_c^j`.
pub fn substitute_root(
    table: &RankTable,
    j: i64,
    c: i64,
) -> Result<TruncatedSeries<Cyclotomic>, GfError> {
    let cu = check_modulus(c)?;
    let coeffs = table
        .rows
        .iter()
        .map(|r| r.substitute_root(j, cu))
        .collect();
    Ok(TruncatedSeries::from_coeffs(&cu, coeffs, table.max_n()))
}

fn check_residue(a: i64, c: i64) -> Result<(), GfError> {
    check_modulus(c)?;
    if (0..c).contains(&a) {
        Ok(())
    } else {
        Err(GfError::ResidueOutOfRange { a, c })
    }
}

/// `v(a, c; n)` for `n <= max_n` by bucketing ranks.
pub fn residue_twist(a: i64, c: i64, table: &RankTable) -> Result<Vec<BigInt>, GfError> {
    check_residue(a, c)?;
    Ok(table.residue_sequence(a, c))
}

/// `v(a, c; n)` through `(1/c) sum_j zeta_c^{-aj} V(zeta_c^j; q)`, computed in
/// the cyclotomic ring. Every coefficient must reduce to a rational integer
/// divisible by `c`.
pub fn residue_twist_orthogonal(a: i64, c: i64, table: &RankTable) -> Result<Vec<BigInt>, GfError> {
    check_residue(a, c)?;
    let cu = c as usize;
    let mut acc: Vec<Cyclotomic> = (0..=table.max_n())
        .map(|_| Cyclotomic::zero_of_order(cu))
        .collect();
    for j in 0..c {
        let twisted = substitute_root(table, j, c)?;
        for (dst, src) in acc.iter_mut().zip(twisted.coeffs()) {
            dst.add_assign_ref(&src.rotate(-a * j));
        }
    }
    let cb = BigInt::from(c);
    acc.iter()
        .enumerate()
        .map(|(n, x)| {
            let total = x
                .as_rational_integer()
                .ok_or(GfError::NotRationalInteger { n })?;
            let (q, r) = total.div_rem(&cb);
            if r.is_zero() {
                Ok(q)
            } else {
                Err(GfError::NotRationalInteger { n })
            }
        })
        .collect()
}

/// Overpartition counts from `(-q; q)_inf / (q; q)_inf`.
pub fn expand_overpartition(max_n: usize) -> Vec<BigInt> {
    let one = BigInt::one();
    let mut series = pochhammer(&-one.clone(), 1, 1, Length::Infinite, max_n)
        .expect("step is positive")
        .into_coeffs();
    for k in 1..=max_n {
        div_one_minus_monomial_in(&mut series, &one, k);
    }
    series
}

/// Partition counts from `1 / (q; q)_inf`.
pub fn expand_partition(max_n: usize) -> Vec<BigInt> {
    let one = BigInt::one();
    pochhammer(&one, 1, 1, Length::Infinite, max_n)
        .expect("step is positive")
        .inv()
        .expect("constant term is 1")
        .into_coeffs()
}

/// `V(w; q)` for complex `w != 0` and `|q| < 1` from the series truncated at
/// `order`. The bound assumes the last coefficients continue to grow no faster
/// than the observed ratio, so it is heuristic.
pub fn evaluate_v(w: Complex64, q: Complex64, order: usize) -> Result<EvalResult, GfError> {
    let r = q.norm();
    if !(r < 1.0) {
        return Err(GfError::OutsideDisc { abs_q: r });
    }
    let series = expand_v(&w, &w.inv(), order);
    let value = series.evaluate(q);
    let window = 8.min(order + 1);
    let last = series.coeffs()[order + 1 - window..]
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm() * r.powi((order + 1 - window + i) as i32))
        .fold(0.0, f64::max);
    let bound = last * r / (1.0 - r) * (order as f64 + 1.0);
    Ok(EvalResult {
        value,
        truncation_bound: bound,
    })
}

/// [`evaluate_v`] with the order doubled from 64 until the tail bound and the
/// change between successive orders both fall below `rel_tol * |V|`.
pub fn evaluate_v_converged(
    w: Complex64,
    q: Complex64,
    rel_tol: f64,
) -> Result<(EvalResult, usize), GfError> {
    let mut order = 64;
    let mut previous = evaluate_v(w, q, order)?;
    while order < 1 << 15 {
        order *= 2;
        let current = evaluate_v(w, q, order)?;
        let change = (current.value - previous.value).norm();
        let scale = current.value.norm();
        if change <= rel_tol * scale && current.truncation_bound <= rel_tol * scale {
            let bound = current.truncation_bound.max(change);
            return Ok((
                EvalResult {
                    value: current.value,
                    truncation_bound: bound,
                },
                order,
            ));
        }
        previous = current;
    }
    Err(GfError::NoConvergence { order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn first_rank_rows() {
        let t = expand_v_rank(3);
        assert_eq!(t.row(0), Some(&Laurent::constant(BigInt::one())));
        assert_eq!(t.count(0, 1), BigInt::from(2));
        assert_eq!(t.count(-1, 1), BigInt::zero());
        assert_eq!(t.row(2), Some(&Laurent::from_coeffs(-1, ints(&[1, 3, 1]))));
        assert_eq!(t.totals(), ints(&[1, 2, 5, 9]));
    }

    #[test]
    fn scalar_run_agrees_with_rank_table() {
        let t = expand_v_rank(40);
        assert_eq!(expand_v_scalar(40), t.totals());
        assert_eq!(&expand_v_scalar(5), &ints(&[1, 2, 5, 9, 16, 29]));
    }

    #[test]
    fn table_is_symmetric_and_bounded() {
        let t = expand_v_rank(30);
        for (n, m, c) in t.entries() {
            assert_eq!(&t.count(-m, n), c);
            assert!(m.unsigned_abs() as usize <= n + 1);
        }
    }

    #[test]
    fn root_of_unity_expansion() {
        let direct = expand_v_at_root(1, 3, 12).unwrap();
        let t = expand_v_rank(12);
        let via_table = substitute_root(&t, 1, 3).unwrap();
        for (a, b) in direct.coeffs().iter().zip(via_table.coeffs()) {
            assert!(a.equivalent(b));
        }
        // 3 + zeta + zeta^2 = 2
        assert_eq!(
            direct.coeffs()[2].as_rational_integer(),
            Some(BigInt::from(2))
        );
        let at_one = expand_v_at_root(0, 1, 12).unwrap();
        let at_zero_of_five = expand_v_at_root(0, 5, 12).unwrap();
        for (a, b) in at_one.coeffs().iter().zip(at_zero_of_five.coeffs()) {
            assert_eq!(a.as_rational_integer(), b.as_rational_integer());
        }
        assert_eq!(expand_v_at_root(0, 0, 3).unwrap_err(), GfError::ZeroModulus);
        assert!(expand_v_at_root(3, 3, 3).is_err());
    }

    #[test]
    fn residue_twist_examples() {
        let t = expand_v_rank(20);
        assert_eq!(residue_twist(0, 1, &t).unwrap(), t.totals());
        let classes: Vec<_> = (0..3).map(|a| residue_twist(a, 3, &t).unwrap()).collect();
        assert_eq!(
            [&classes[0][2], &classes[1][2], &classes[2][2]],
            [&BigInt::from(3), &BigInt::one(), &BigInt::one()]
        );
        for n in 0..=20 {
            let sum: BigInt = classes.iter().map(|c| &c[n]).sum();
            assert_eq!(Some(sum), t.total(n));
        }
        assert!(residue_twist(3, 3, &t).is_err());
    }

    #[test]
    fn orthogonality_matches_bucketing() {
        let t = expand_v_rank(25);
        for c in 1..=9 {
            for a in 0..c {
                assert_eq!(
                    residue_twist_orthogonal(a, c, &t).unwrap(),
                    residue_twist(a, c, &t).unwrap(),
                    "a={a} c={c}"
                );
            }
        }
    }

    #[test]
    fn residue_classes_are_monotone() {
        let t = expand_v_rank(60);
        for c in 1..=9 {
            for a in 0..c {
                let seq = t.residue_sequence(a, c);
                assert!(seq.windows(2).all(|w| w[0] <= w[1]), "a={a} c={c}");
            }
        }
    }

    #[test]
    fn overpartitions_and_partitions() {
        assert_eq!(expand_overpartition(6), ints(&[1, 2, 4, 8, 14, 24, 40]));
        assert_eq!(
            expand_partition(10),
            ints(&[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42])
        );
        let p = expand_overpartition(200);
        assert!(p.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn complex_evaluation_matches_exact_table() {
        let t = expand_v_rank(80);
        let w = Complex64::from_polar(1.0, 0.7);
        let q = Complex64::new(0.1, 0.2);
        let exact: Complex64 = t
            .rows()
            .iter()
            .enumerate()
            .map(|(n, row)| row.eval_complex(w) * q.powi(n as i32))
            .sum();
        let numeric = evaluate_v(w, q, 80).unwrap();
        assert!((numeric.value - exact).norm() < 1e-12 * exact.norm());
        assert!(numeric.truncation_bound < 1e-20);
        let (converged, _) = evaluate_v_converged(w, q, 1e-13).unwrap();
        assert!((converged.value - exact).norm() < 1e-12 * exact.norm());
        assert!(evaluate_v(w, Complex64::new(1.0, 0.0), 10).is_err());
    }

    #[test]
    fn rank_table_accessors() {
        let t = expand_v_rank(4);
        assert_eq!(t.max_n(), 4);
        assert_eq!(t.count(0, 99), BigInt::zero());
        assert_eq!(t.total(99), None);
        assert_eq!(t.truncated(2).max_n(), 2);
        assert_eq!(t.residue_count(1, 2, 2), Some(BigInt::from(2)));
        let collected: Vec<_> = t
            .entries()
            .take(3)
            .map(|(n, m, c)| (n, m, c.clone()))
            .collect();
        assert_eq!(
            collected,
            vec![
                (0, 0, BigInt::one()),
                (1, 0, BigInt::from(2)),
                (2, -1, BigInt::one())
            ]
        );
    }
}

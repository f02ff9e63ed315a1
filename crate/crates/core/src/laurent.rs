//! Laurent polynomials in `w` with integer coefficients.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::ring::Ring;

/// `sum_m coeffs[m - low] * w^m`, kept trimmed so that the first and last
/// stored coefficients are nonzero. The zero polynomial stores nothing.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(value: BigInt) -> Self {
        Self::monomial(value, 0)
    }

    /// `value * w^exponent`.
    pub fn monomial(value: BigInt, exponent: i64) -> Self {
        let mut out = Self {
            low: exponent,
            coeffs: alloc::vec![value],
        };
        out.trim();
        out
    }

    /// Builds `sum_i coeffs[i] * w^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut out = Self { low, coeffs };
        out.trim();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// Coefficient of `w^exponent`.
    pub fn coeff(&self, exponent: i64) -> BigInt {
        let idx = exponent - self.low;
        if idx < 0 {
            return BigInt::zero();
        }
        self.coeffs
            .get(idx as usize)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Value at `w = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn eval_complex(&self, w: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + c.to_f64().unwrap_or(f64::NAN);
        }
        acc * w.powi(self.low as i32)
    }

    /// Image under `w -> zeta_order^step`, as an element of the cyclotomic ring
    /// of the given order.
    pub fn substitute_root(&self, step: i64, order: usize) -> Cyclotomic {
        let mut out = Cyclotomic::zero_of_order(order);
        for (m, c) in self.terms() {
            out.add_at(m * step, c);
        }
        out
    }

    /// Sum of the coefficients whose exponent is congruent to `residue` mod
    /// `modulus`.
    pub fn residue_sum(&self, residue: i64, modulus: i64) -> BigInt {
        self.terms()
            .filter(|(m, _)| (m - residue).rem_euclid(modulus) == 0)
            .map(|(_, c)| c)
            .sum()
    }

    /// `self += scale * w^shift * other`.
    fn add_scaled_shifted(&mut self, other: &Laurent, scale: &BigInt, shift: i64) {
        if other.is_zero() || scale.is_zero() {
            return;
        }
        let other_low = other.low + shift;
        let other_high = other_low + other.coeffs.len() as i64 - 1;
        if self.is_zero() {
            self.low = other_low;
        }
        let high = self.low + self.coeffs.len() as i64 - 1;
        let new_low = self.low.min(other_low);
        let new_high = high.max(other_high);
        if new_low < self.low {
            let pad = (self.low - new_low) as usize;
            self.coeffs
                .splice(0..0, core::iter::repeat_with(BigInt::zero).take(pad));
            self.low = new_low;
        }
        let len = (new_high - self.low + 1) as usize;
        if self.coeffs.len() < len {
            self.coeffs.resize_with(len, BigInt::zero);
        }
        let offset = (other_low - self.low) as usize;
        let unit = scale.is_one();
        for (dst, src) in self.coeffs[offset..].iter_mut().zip(&other.coeffs) {
            if unit {
                *dst += src;
            } else {
                *dst += scale * src;
            }
        }
        self.trim();
    }

    fn single_term(&self) -> Option<(i64, &BigInt)> {
        (self.coeffs.len() == 1).then(|| (self.low, &self.coeffs[0]))
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.low = 0;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

impl Ring for Laurent {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        Laurent::zero()
    }

    fn one_in(_: &()) -> Self {
        Laurent::constant(BigInt::one())
    }

    fn from_i64_in(_: &(), value: i64) -> Self {
        Laurent::constant(BigInt::from(value))
    }

    fn vanishes(&self) -> bool {
        Laurent::is_zero(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        self.add_scaled_shifted(rhs, &BigInt::one(), 0);
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        self.add_scaled_shifted(rhs, &-BigInt::one(), 0);
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = alloc::vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent::from_coeffs(self.low + rhs.low, coeffs)
    }

    fn neg_ref(&self) -> Self {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn unit_inverse(&self) -> Option<Self> {
        let (e, c) = self.single_term()?;
        c.abs().is_one().then(|| Laurent::monomial(c.clone(), -e))
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if let Some((e, c)) = a.single_term() {
            self.add_scaled_shifted(b, c, e);
        } else if let Some((e, c)) = b.single_term() {
            self.add_scaled_shifted(a, c, e);
        } else {
            let product = a.mul_ref(b);
            self.add_assign_ref(&product);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(low: i64, coeffs: &[i64]) -> Laurent {
        Laurent::from_coeffs(low, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn trimming_keeps_exponents() {
        let p = lp(-2, &[0, 0, 3, 0, 5, 0]);
        assert_eq!(p.min_exponent(), Some(0));
        assert_eq!(p.max_exponent(), Some(2));
        assert_eq!(p.coeff(2), BigInt::from(5));
        assert_eq!(p.coeff(-7), BigInt::zero());
        assert!(lp(4, &[0, 0]).is_zero());
    }

    #[test]
    fn monomial_products_shift() {
        let w = Laurent::monomial(BigInt::one(), 1);
        let winv = Laurent::monomial(BigInt::one(), -1);
        assert_eq!(w.mul_ref(&winv), Laurent::one_in(&()));
        assert_eq!(w.unit_inverse(), Some(winv.clone()));
        let mut acc = lp(0, &[1, 1]);
        acc.add_mul_assign(&winv, &lp(0, &[2, 3]));
        assert_eq!(acc, lp(-1, &[2, 4, 1]));
    }

    #[test]
    fn cancellation_to_zero() {
        let mut p = lp(-1, &[1, 2]);
        p.sub_assign_ref(&lp(-1, &[1, 2]));
        assert!(p.is_zero());
        assert_eq!(p, Laurent::zero());
    }

    #[test]
    fn residue_sums_partition_the_total() {
        let p = lp(-3, &[1, 2, 3, 4, 5, 6, 7]);
        let total: BigInt = (0..3).map(|a| p.residue_sum(a, 3)).sum();
        assert_eq!(total, p.eval_at_one());
        // exponents -3, 0, 3 carry 1, 4, 7
        assert_eq!(p.residue_sum(0, 3), BigInt::from(12));
    }
}

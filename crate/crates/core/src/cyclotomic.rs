//! Integer combinations of powers of a primitive root of unity.
//!
//! An element of order `c` is a vector `a_0..a_{c-1}` standing for
//! `sum_j a_j * zeta_c^j`, reduced modulo `x^c - 1`. The representation is
//! redundant (the kernel of `x -> zeta_c` is the ideal generated by the
//! cyclotomic polynomial `Phi_c`), so equality of numbers is decided by
//! [`Cyclotomic::equivalent`] rather than by comparing vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    /// # Panics
    /// If `order` is zero.
    pub fn zero_of_order(order: usize) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self {
            coeffs: vec![BigInt::zero(); order],
        }
    }

    /// The rational integer `value` in the ring of the given order.
    pub fn integer(order: usize, value: BigInt) -> Self {
        let mut out = Self::zero_of_order(order);
        out.coeffs[0] = value;
        out
    }

    /// `zeta_order^exponent`.
    pub fn root_power(order: usize, exponent: i64) -> Self {
        let mut out = Self::zero_of_order(order);
        out.add_at(exponent, &BigInt::one());
        out
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "cyclotomic order must be positive");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `self += value * zeta^exponent`.
    pub fn add_at(&mut self, exponent: i64, value: &BigInt) {
        let idx = exponent.rem_euclid(self.order() as i64) as usize;
        self.coeffs[idx] += value;
    }

    /// `self * zeta^exponent`.
    pub fn rotate(&self, exponent: i64) -> Self {
        let c = self.order() as i64;
        let mut coeffs = vec![BigInt::zero(); self.order()];
        for (j, a) in self.coeffs.iter().enumerate() {
            coeffs[(j as i64 + exponent).rem_euclid(c) as usize] = a.clone();
        }
        Self { coeffs }
    }

    /// Image under `zeta_c -> exp(2 pi i / c)`.
    pub fn to_complex(&self) -> Complex64 {
        let c = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let angle = 2.0 * PI * j as f64 / c;
                Complex64::from_polar(a.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    /// Canonical representative: remainder modulo `Phi_c(x)`, of length
    /// `phi(c)`.
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi = cyclotomic_polynomial(self.order());
        poly_rem_monic(&self.coeffs, &phi)
    }

    /// Whether both vectors represent the same complex number.
    pub fn equivalent(&self, other: &Self) -> bool {
        if self.order() != other.order() {
            return false;
        }
        let mut diff = self.clone();
        diff.sub_assign_ref(other);
        diff.reduced().iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if it is one.
    pub fn as_rational_integer(&self) -> Option<BigInt> {
        let r = self.reduced();
        r.iter()
            .skip(1)
            .all(Zero::is_zero)
            .then(|| r.first().cloned().unwrap_or_else(BigInt::zero))
    }
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d of n
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = poly_div_exact(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = num.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let coef = rem[k + dd].clone();
        if coef.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &coef * d;
        }
        quot[k] = coef;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

fn poly_rem_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() > dd {
        for k in (dd..rem.len()).rev() {
            let coef = rem[k].clone();
            if coef.is_zero() {
                continue;
            }
            for (i, d) in den.iter().enumerate() {
                rem[k - dd + i] -= &coef * d;
            }
        }
    }
    rem.resize_with(dd, BigInt::zero);
    rem
}

impl Ring for Cyclotomic {
    type Context = usize;

    fn context(&self) -> usize {
        self.order()
    }

    fn zero_in(order: &usize) -> Self {
        Self::zero_of_order(*order)
    }

    fn one_in(order: &usize) -> Self {
        Self::integer(*order, BigInt::one())
    }

    fn from_i64_in(order: &usize, value: i64) -> Self {
        Self::integer(*order, BigInt::from(value))
    }

    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.order(), rhs.order());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        debug_assert_eq!(self.order(), rhs.order());
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.order(), rhs.order());
        let c = self.order();
        let mut coeffs = vec![BigInt::zero(); c];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[(i + j) % c] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    fn neg_ref(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Only signed powers of `zeta` are inverted.
    fn unit_inverse(&self) -> Option<Self> {
        let mut nonzero = self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero());
        let (j, a) = nonzero.next()?;
        if nonzero.next().is_some() || !a.abs().is_one() {
            return None;
        }
        let mut out = Self::zero_of_order(self.order());
        out.add_at(-(j as i64), a);
        Some(out)
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let c = self.order();
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    self.coeffs[(i + j) % c] += x * y;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(3), ints(&[1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(9), ints(&[1, 0, 0, 1, 0, 0, 1]));
    }

    #[test]
    fn sum_of_roots_is_rational() {
        // 3 + zeta_3 + zeta_3^2 = 2
        let x = Cyclotomic::from_coeffs(ints(&[3, 1, 1]));
        assert_eq!(x.as_rational_integer(), Some(BigInt::from(2)));
        let y = Cyclotomic::from_coeffs(ints(&[0, 1, 0]));
        assert_eq!(y.as_rational_integer(), None);
        // zeta_9^3 + zeta_9^6 = -1, which the all-ones kernel alone would miss
        let z = Cyclotomic::from_coeffs(ints(&[0, 0, 0, 1, 0, 0, 1, 0, 0]));
        assert_eq!(z.as_rational_integer(), Some(BigInt::from(-1)));
    }

    #[test]
    fn powers_of_zeta_invert() {
        let z = Cyclotomic::root_power(5, 2);
        let inv = z.unit_inverse().unwrap();
        assert_eq!(z.mul_ref(&inv), Cyclotomic::one_in(&5));
        assert_eq!(inv, Cyclotomic::root_power(5, -2));
        assert!(Cyclotomic::from_coeffs(ints(&[1, 1, 0]))
            .unit_inverse()
            .is_none());
    }

    #[test]
    fn rotation_matches_multiplication() {
        let x = Cyclotomic::from_coeffs(ints(&[1, -2, 5, 7]));
        assert_eq!(x.rotate(3), x.mul_ref(&Cyclotomic::root_power(4, 3)));
        assert_eq!(x.rotate(-1), x.rotate(3));
    }

    #[test]
    fn complex_embedding_of_roots() {
        let z = Cyclotomic::root_power(6, 1).to_complex();
        assert!((z - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-15);
        let all = Cyclotomic::from_coeffs(ints(&[1; 7]));
        assert!(all.to_complex().norm() < 1e-14);
        assert!(all.equivalent(&Cyclotomic::zero_of_order(7)));
    }
}

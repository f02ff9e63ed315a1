//! Coefficient rings for [`TruncatedSeries`](crate::series::TruncatedSeries).

use core::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative ring with unity, operated on by reference.
///
/// Elements of one ring instance share a [`Ring::Context`]. For most rings the
/// context is `()`; a cyclotomic ring carries its modulus. Two series can only
/// be combined when their contexts agree.
pub trait Ring: Clone + Debug + PartialEq {
    type Context: Clone + Debug + PartialEq;

    fn context(&self) -> Self::Context;
    fn zero_in(ctx: &Self::Context) -> Self;
    fn one_in(ctx: &Self::Context) -> Self;
    fn from_i64_in(ctx: &Self::Context, value: i64) -> Self;

    fn vanishes(&self) -> bool;
    fn add_assign_ref(&mut self, rhs: &Self);
    fn sub_assign_ref(&mut self, rhs: &Self);
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;

    /// The multiplicative inverse, when `self` is a unit the ring knows how to
    /// invert.
    fn unit_inverse(&self) -> Option<Self>;

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let product = a.mul_ref(b);
        self.add_assign_ref(&product);
    }
}

impl Ring for BigInt {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        BigInt::zero()
    }

    fn one_in(_: &()) -> Self {
        BigInt::one()
    }

    fn from_i64_in(_: &(), value: i64) -> Self {
        BigInt::from(value)
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn unit_inverse(&self) -> Option<Self> {
        (self.abs().is_one()).then(|| self.clone())
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_one() {
            *self += b;
        } else if b.is_one() {
            *self += a;
        } else {
            *self += a * b;
        }
    }
}

impl Ring for BigRational {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }

    fn one_in(_: &()) -> Self {
        BigRational::one()
    }

    fn from_i64_in(_: &(), value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn unit_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Ring for Complex64 {
    type Context = ();

    fn context(&self) {}

    fn zero_in(_: &()) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one_in(_: &()) -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64_in(_: &(), value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }

    fn vanishes(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn unit_inverse(&self) -> Option<Self> {
        (!Ring::vanishes(self)).then(|| self.inv())
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

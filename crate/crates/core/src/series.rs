//! Power series in `q` truncated at a fixed order.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of
//! `q^0 ..= q^N`; everything above is unknown. Binary operations truncate to
//! the smaller order and never read past either operand. Multiplication is the
//! schoolbook Cauchy product.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series have different coefficient rings")]
    RingMismatch,
    #[error("constant term is not a unit")]
    NonUnit,
    #[error("coefficient q^{index} requested from a series truncated at q^{order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("infinite product with zero exponent step does not converge")]
    Divergent,
}

#[derive(Debug, Clone)]
pub struct TruncatedSeries<R: Ring> {
    ctx: R::Context,
    coeffs: Vec<R>,
}

/// Number of factors in a q-Pochhammer product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    /// Stop once the factors are `1 mod q^(N+1)`.
    Infinite,
}

impl<R: Ring> TruncatedSeries<R> {
    /// The zero series `O(q^(order+1))`.
    pub fn zero(ctx: &R::Context, order: usize) -> Self {
        Self {
            ctx: ctx.clone(),
            coeffs: (0..=order).map(|_| R::zero_in(ctx)).collect(),
        }
    }

    pub fn one(ctx: &R::Context, order: usize) -> Self {
        Self::monomial(R::one_in(ctx), 0, order)
    }

    /// `value * q^power`, which is zero if `power > order`.
    pub fn monomial(value: R, power: usize, order: usize) -> Self {
        let ctx = value.context();
        let mut out = Self::zero(&ctx, order);
        if power <= order {
            out.coeffs[power] = value;
        }
        out
    }

    /// Series with the given coefficients, padded with zeros (or cut) to
    /// `order`.
    pub fn from_coeffs(ctx: &R::Context, mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        while coeffs.len() <= order {
            coeffs.push(R::zero_in(ctx));
        }
        Self {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Result<&R, SeriesError> {
        self.coeffs.get(index).ok_or(SeriesError::IndexOutOfRange {
            index,
            order: self.order(),
        })
    }

    pub fn truncated(&self, order: usize) -> Self {
        let keep = order.min(self.order());
        Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs[..=keep].to_vec(),
        }
    }

    fn check(&self, other: &Self) -> Result<usize, SeriesError> {
        if self.ctx != other.ctx {
            return Err(SeriesError::RingMismatch);
        }
        Ok(self.order().min(other.order()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        let order = self.check(other)?;
        let coeffs = self.coeffs[..=order]
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                let mut s = a.clone();
                s.add_assign_ref(b);
                s
            })
            .collect();
        Ok(Self {
            ctx: self.ctx.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(R::neg_ref).collect(),
        }
    }

    pub fn scale(&self, factor: &R) -> Result<Self, SeriesError> {
        if factor.context() != self.ctx {
            return Err(SeriesError::RingMismatch);
        }
        Ok(Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul_ref(factor)).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        let order = self.check(other)?;
        let mut out = Self::zero(&self.ctx, order);
        for (i, a) in self.coeffs[..=order].iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.vanishes() {
                    out.coeffs[i + j].add_mul_assign(a, b);
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the same order.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let head_inv = self.coeffs[0].unit_inverse().ok_or(SeriesError::NonUnit)?;
        let order = self.order();
        let mut out: Vec<R> = Vec::with_capacity(order + 1);
        out.push(head_inv.clone());
        let minus_head_inv = head_inv.neg_ref();
        for k in 1..=order {
            let mut acc = R::zero_in(&self.ctx);
            for i in 1..=k {
                let a = &self.coeffs[i];
                if !a.vanishes() {
                    acc.add_mul_assign(a, &out[k - i]);
                }
            }
            out.push(acc.mul_ref(&minus_head_inv));
        }
        Ok(Self {
            ctx: self.ctx.clone(),
            coeffs: out,
        })
    }

    /// In place `self *= (1 + a q^k)`.
    pub fn mul_one_plus_monomial(&mut self, a: &R, k: usize) {
        mul_one_plus_monomial_in(&mut self.coeffs, a, k);
    }

    /// In place `self /= (1 - a q^k)` for `k >= 1`.
    pub fn div_one_minus_monomial(&mut self, a: &R, k: usize) {
        div_one_minus_monomial_in(&mut self.coeffs, a, k);
    }

    /// Applies a coefficientwise ring map (a substitution homomorphism, say).
    pub fn map<S: Ring>(&self, ctx: &S::Context, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries {
            ctx: ctx.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Whether both series agree on `0..=min(order)`. Same as `==`.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self == other
    }
}

impl TruncatedSeries<Complex64> {
    /// Value of the truncated polynomial at `q`.
    pub fn evaluate(&self, q: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * q + c)
    }
}

/// Equal iff the coefficient rings match and the coefficients agree up to the
/// smaller truncation order.
impl<R: Ring> PartialEq for TruncatedSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a == b)
    }
}

pub(crate) fn mul_one_plus_monomial_in<R: Ring>(coeffs: &mut [R], a: &R, k: usize) {
    if k == 0 {
        let factor = {
            let mut f = a.clone();
            f.add_assign_ref(&R::one_in(&a.context()));
            f
        };
        for c in coeffs.iter_mut() {
            *c = c.mul_ref(&factor);
        }
        return;
    }
    for i in (k..coeffs.len()).rev() {
        let (lo, hi) = coeffs.split_at_mut(i);
        if !lo[i - k].vanishes() {
            hi[0].add_mul_assign(a, &lo[i - k]);
        }
    }
}

pub(crate) fn div_one_minus_monomial_in<R: Ring>(coeffs: &mut [R], a: &R, k: usize) {
    assert!(k >= 1, "1 - a is not invertible in general");
    for i in k..coeffs.len() {
        let (lo, hi) = coeffs.split_at_mut(i);
        if !lo[i - k].vanishes() {
            hi[0].add_mul_assign(a, &lo[i - k]);
        }
    }
}

/// `prod_{j < len} (1 - a q^(start + j*step))` truncated at `order`.
///
/// With `start = 1, step = 1` this is `(a q; q)_len`; `(q; q^2)_n` is
/// `pochhammer(1, 1, 2, n)`.
pub fn pochhammer<R: Ring>(
    a: &R,
    start: usize,
    step: usize,
    len: Length,
    order: usize,
) -> Result<TruncatedSeries<R>, SeriesError> {
    let ctx = a.context();
    let mut out = TruncatedSeries::one(&ctx, order);
    let minus_a = a.neg_ref();
    let count = match len {
        Length::Finite(n) => n,
        Length::Infinite => {
            if step == 0 {
                return Err(SeriesError::Divergent);
            }
            // factors with exponent > order are 1 modulo q^(order+1)
            if start > order {
                0
            } else {
                (order - start) / step + 1
            }
        }
    };
    for j in 0..count {
        let exp = start + j * step;
        if exp > order {
            break;
        }
        out.mul_one_plus_monomial(&minus_a, exp);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use alloc::vec;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn s(coeffs: &[i64], order: usize) -> TruncatedSeries<BigInt> {
        TruncatedSeries::from_coeffs(
            &(),
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            order,
        )
    }

    #[test]
    fn addition_examples() {
        assert_eq!(s(&[1, 1], 4).add(&s(&[1, -1], 4)).unwrap(), s(&[2], 4));
        let a = s(&[3, 0, 7], 5);
        assert_eq!(a.add(&TruncatedSeries::zero(&(), 5)).unwrap(), a);
        assert_eq!(
            s(&[1, 2, 1], 2).add(&s(&[0, 0, 1], 2)).unwrap(),
            s(&[1, 2, 2], 2)
        );
    }

    #[test]
    fn addition_truncates_to_min_order() {
        let sum = s(&[1, 1, 1, 1, 1], 4).add(&s(&[1, 1], 2)).unwrap();
        assert_eq!(sum.order(), 2);
        assert_eq!(sum.coeffs(), &[2, 2, 1].map(BigInt::from));
    }

    #[test]
    fn multiplication_examples() {
        let prod = s(&[1, -1], 3).mul(&s(&[1, 1, 1, 1], 3)).unwrap();
        assert_eq!(prod, s(&[1], 3));
        let a = s(&[2, -5, 0, 9], 3);
        assert_eq!(a.mul(&TruncatedSeries::one(&(), 3)).unwrap(), a);
        let b = s(&[1, 1], 4);
        assert_eq!(b.mul(&b).unwrap(), s(&[1, 2, 1], 4));
    }

    #[test]
    fn inverse_examples() {
        let geo = s(&[1, -1], 10).inv().unwrap();
        assert_eq!(geo, s(&[1; 11], 10));
        assert_eq!(*geo.coeff(7).unwrap(), BigInt::from(1));
        assert_eq!(s(&[1], 6).inv().unwrap(), s(&[1], 6));
        assert_eq!(geo.mul(&s(&[1, -1], 10)).unwrap(), s(&[1], 10));
    }

    #[test]
    fn inverse_needs_unit() {
        assert_eq!(s(&[2, 1], 3).inv(), Err(SeriesError::NonUnit));
        assert_eq!(s(&[0, 1], 3).inv(), Err(SeriesError::NonUnit));
    }

    #[test]
    fn coefficient_access() {
        let a = s(&[1, 0, 3], 2);
        assert_eq!(*a.coeff(2).unwrap(), BigInt::from(3));
        assert_eq!(*a.coeff(1).unwrap(), BigInt::from(0));
        assert_eq!(
            a.coeff(3),
            Err(SeriesError::IndexOutOfRange { index: 3, order: 2 })
        );
    }

    #[test]
    fn pochhammer_examples() {
        let one = BigInt::from(1);
        assert_eq!(
            pochhammer(&one, 1, 1, Length::Finite(2), 6).unwrap(),
            s(&[1, -1, -1, 1], 6)
        );
        assert_eq!(
            pochhammer(&one, 1, 1, Length::Finite(0), 6).unwrap(),
            s(&[1], 6)
        );
        assert_eq!(
            pochhammer(&one, 1, 2, Length::Finite(2), 6).unwrap(),
            s(&[1, -1, 0, -1, 1], 6)
        );
        // Euler's pentagonal number theorem
        assert_eq!(
            pochhammer(&one, 1, 1, Length::Infinite, 12).unwrap(),
            s(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1], 12)
        );
        assert_eq!(
            pochhammer(&one, 0, 0, Length::Infinite, 3).unwrap_err(),
            SeriesError::Divergent
        );
    }

    #[test]
    fn cyclotomic_orders_must_match() {
        let a = TruncatedSeries::one(&3usize, 4);
        let b = TruncatedSeries::<Cyclotomic>::one(&5usize, 4);
        assert_eq!(a.add(&b).unwrap_err(), SeriesError::RingMismatch);
        assert_eq!(a.mul(&b).unwrap_err(), SeriesError::RingMismatch);
    }

    #[test]
    fn rational_inverse() {
        use num_rational::BigRational;
        let two = BigRational::from_integer(BigInt::from(2));
        let a = TruncatedSeries::from_coeffs(
            &(),
            vec![two.clone(), BigRational::from_integer(BigInt::from(1))],
            5,
        );
        let prod = a.mul(&a.inv().unwrap()).unwrap();
        assert_eq!(prod, TruncatedSeries::one(&(), 5));
        assert_eq!(a.inv().unwrap().coeffs()[0], two.recip());
    }

    fn poly() -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-20i64..20, 0..8)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly(), b in poly(), c in poly(), order in 0usize..10) {
            let (a, b, c) = (s(&a, order), s(&b, order), s(&c, order));
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.add(&a.neg()).unwrap(), TruncatedSeries::zero(&(), order));
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn inverse_round_trip(tail in poly(), sign in prop::bool::ANY, order in 0usize..12) {
            let mut coeffs = vec![if sign { 1 } else { -1 }];
            coeffs.extend(tail);
            let a = s(&coeffs, order);
            prop_assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), TruncatedSeries::one(&(), order));
        }

        #[test]
        fn sparse_factor_updates_match_products(base in poly(), k in 1usize..5, order in 0usize..10) {
            let a = s(&base, order);
            let mut b = a.clone();
            b.mul_one_plus_monomial(&BigInt::from(3), k);
            let factor = TruncatedSeries::from_coeffs(&(), {
                let mut v = vec![BigInt::from(0); k + 1];
                v[0] = BigInt::from(1);
                v[k] = BigInt::from(3);
                v
            }, order);
            prop_assert_eq!(&b, &a.mul(&factor).unwrap());
            b.div_one_minus_monomial(&BigInt::from(-3), k);
            prop_assert_eq!(b, a);
        }
    }
}

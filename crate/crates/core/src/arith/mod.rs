//! Exact scalar arithmetic: the coefficient rings every series and
//! polynomial in this crate is generic over.
//!
//! Four rings implement [`Coefficient`]:
//!
//! * [`Integer`] for eta quotients and anything else with integral expansions,
//! * [`Rational`] for the normalized basis forms, lifts and mock coefficients,
//! * [`QuadElem`] for theta series with values in an imaginary quadratic field,
//! * `f64` for quick approximate work.

mod kron;
mod poly;
mod quad;
mod ratfunc;
mod rational;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

pub(crate) use kron::kron_mul;
pub use poly::Polynomial;
pub use quad::QuadElem;
pub use ratfunc::RationalFunction;
pub use rational::{bigint_to_f64, parse_rational, rat, rational_to_f64, Integer, Rational};

/// A commutative ring usable as a series or polynomial coefficient.
///
/// The `*_ref` methods exist so that hot loops can avoid cloning big
/// numbers; the default implementations fall back to the owned operators.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    /// Multiplicative inverse, if it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.clone() + rhs.clone();
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self = self.clone() - rhs.clone();
    }

    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        self.add_assign_ref(&p);
    }

    /// First `len` coefficients of the product of two dense coefficient
    /// vectors, when the ring has something faster than schoolbook.
    fn dense_mul(_a: &[Self], _b: &[Self], _len: usize) -> Option<Vec<Self>> {
        None
    }
}

/// Coefficient rings containing the rationals.
pub trait RationalEmbedding: Coefficient {
    fn from_rational(r: &Rational) -> Self;
}

impl Coefficient for Integer {
    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn dense_mul(a: &[Self], b: &[Self], len: usize) -> Option<Vec<Self>> {
        Some(kron::kron_mul(a, b, len))
    }
}

impl Coefficient for Rational {
    fn from_integer(n: &BigInt) -> Self {
        Rational::from_integer(n.clone())
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn dense_mul(a: &[Self], b: &[Self], len: usize) -> Option<Vec<Self>> {
        let clear = |v: &[Self]| {
            let l = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&l / c.denom())).collect();
            (l, ints)
        };
        let (la, ia) = clear(a);
        let (lb, ib) = clear(b);
        let l = la * lb;
        Some(
            kron::kron_mul(&ia, &ib, len)
                .into_iter()
                .map(|c| Rational::new(c, l.clone()))
                .collect(),
        )
    }
}

impl RationalEmbedding for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Coefficient for f64 {
    fn from_integer(n: &BigInt) -> Self {
        bigint_to_f64(n)
    }

    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }
}

impl RationalEmbedding for f64 {
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
}

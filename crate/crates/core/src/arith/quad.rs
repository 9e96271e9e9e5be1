use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{parse_rational, Coefficient, Rational, RationalEmbedding};
use crate::error::{Error, Result};

/// `a + b·√d` in the quadratic field ℚ(√d).
///
/// `d` is square-free. The value `d = 1` is reserved for plain rationals
/// (`b = 0`); those embed into every quadratic field, so combining them with
/// an element of ℚ(√d) adopts that `d`. Combining two irrational elements of
/// different fields is a domain error: the checked `try_*` methods report it,
/// the operator impls panic.
#[derive(Clone, Debug)]
pub struct QuadElem {
    a: Rational,
    b: Rational,
    d: i64,
}

fn is_square_free(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        if n.is_multiple_of(p) {
            n /= p;
        }
        p += 1;
    }
    true
}

impl QuadElem {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self> {
        if !is_square_free(d) {
            return Err(Error::domain(format!("{d} is not a nonzero square-free integer")));
        }
        if d == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 1 }
    }

    /// `√d` itself.
    pub fn sqrt(d: i64) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// `ζ₆ = e^{2πi/6} = (1 + √−3)/2`.
    pub fn zeta6() -> Self {
        let half = Rational::new(1.into(), 2.into());
        Self { a: half.clone(), b: half, d: -3 }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> Result<i64> {
        if self.d == other.d || other.b.is_zero() {
            Ok(self.d)
        } else if self.b.is_zero() {
            Ok(other.d)
        } else {
            Err(Error::domain(format!(
                "mixed quadratic fields Q(sqrt({})) and Q(sqrt({}))",
                self.d, other.d
            )))
        }
    }

    fn normalized(a: Rational, b: Rational, d: i64) -> Self {
        // keep d on zero-b values so that a field, once fixed, sticks
        Self { a, b, d }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(Self::normalized(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        Ok(Self::normalized(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_d(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * Rational::from_integer(d.into());
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn conj(&self) -> Self {
        Self::normalized(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a² − d·b²`
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(self.d.into())
    }

    /// `2a`
    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::normalized(c.a / &n, c.b / n, self.d))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        acc.d = self.d;
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::normalized(&self.a * r, &self.b * r, self.d)
    }

    /// Value as a complex double `(re, im)`.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let a = super::rational_to_f64(&self.a);
        let b = super::rational_to_f64(&self.b);
        if self.d > 0 {
            (a + b * (self.d as f64).sqrt(), 0.0)
        } else {
            (a, b * ((-self.d) as f64).sqrt())
        }
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.b.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadElem {}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl FromStr for QuadElem {
    type Err = Error;

    /// Accepts `a+b*sqrt(d)`, `a-b*sqrt(d)`, `b*sqrt(d)` and plain rationals.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(pos) = s.find("*sqrt(") else {
            return Ok(Self::rational(parse_rational(&s)?));
        };
        let rest = &s[pos + 6..];
        let d_str = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(format!("unterminated sqrt in {s:?}")))?;
        let d: i64 = d_str
            .parse()
            .map_err(|_| Error::parse(format!("bad radicand in {s:?}")))?;
        let head = &s[..pos];
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'+' | b'-' | b'/'));
        let (a, b) = match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let b_str = if bytes[i] == b'+' { &head[i + 1..] } else { &head[i..] };
                (a, parse_rational(b_str)?)
            }
            None => (Rational::zero(), parse_rational(head)?),
        };
        Self::new(a, b, d)
    }
}

impl Zero for QuadElem {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadElem {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("QuadElem addition")
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("QuadElem subtraction")
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("QuadElem multiplication")
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> Self {
        Self::normalized(-self.a, -self.b, self.d)
    }
}

impl Coefficient for QuadElem {
    fn from_integer(n: &BigInt) -> Self {
        Self::rational(Rational::from_integer(n.clone()))
    }

    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("QuadElem multiplication")
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        let d = self.common_d(rhs).expect("QuadElem addition");
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.d = d;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        let d = self.common_d(rhs).expect("QuadElem subtraction");
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.d = d;
    }
}

impl RationalEmbedding for QuadElem {
    fn from_rational(r: &Rational) -> Self {
        Self::rational(r.clone())
    }
}

impl From<Rational> for QuadElem {
    fn from(r: Rational) -> Self {
        Self::rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn q(a: (i64, i64), b: (i64, i64), d: i64) -> QuadElem {
        QuadElem::new(rat(a.0, a.1), rat(b.0, b.1), d).unwrap()
    }

    #[test]
    fn norms_of_cm_values() {
        let x = q((5, 1), (8, 1), -11);
        let prod = x.mul_ref(&x.conj());
        assert_eq!(prod, QuadElem::rational(rat(729, 1)));
        assert_eq!(x.norm(), rat(729, 1));
        assert_eq!(x.trace(), rat(10, 1));
    }

    #[test]
    fn conj_of_zero() {
        let z = q((0, 1), (0, 1), -3);
        assert!(z.conj().is_zero());
    }

    #[test]
    fn cube_of_shortest_coset_vector() {
        // (3 + √−3)/2 = 1 + ζ₆
        let x = q((3, 2), (1, 2), -3);
        assert_eq!(x.pow(3), q((0, 1), (3, 1), -3));
        assert_eq!(QuadElem::zeta6().pow(6), QuadElem::one());
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let x = q((1, 1), (1, 1), -3);
        let y = q((1, 1), (1, 1), -11);
        assert!(matches!(x.try_mul(&y), Err(Error::Domain(_))));
        assert!(matches!(x.try_add(&y), Err(Error::Domain(_))));
        // rationals embed everywhere
        let r = QuadElem::rational(rat(2, 3));
        assert_eq!(x.try_mul(&r).unwrap(), q((2, 3), (2, 3), -3));
    }

    #[test]
    fn rejects_non_square_free() {
        assert!(QuadElem::new(rat(1, 1), rat(1, 1), -12).is_err());
        assert!(QuadElem::new(rat(1, 1), rat(1, 1), 0).is_err());
        assert_eq!(QuadElem::new(rat(1, 1), rat(2, 1), 1).unwrap(), QuadElem::rational(rat(3, 1)));
    }

    #[test]
    fn text_format() {
        let x = q((0, 1), (1, 3), -3);
        assert_eq!(x.to_string(), "0+1/3*sqrt(-3)");
        assert_eq!("0+1/3*sqrt(-3)".parse::<QuadElem>().unwrap(), x);
        assert_eq!("-1/2-3*sqrt(-3)".parse::<QuadElem>().unwrap(), q((-1, 2), (-3, 1), -3));
        assert_eq!("1+-3*sqrt(-3)".parse::<QuadElem>().unwrap(), q((1, 1), (-3, 1), -3));
        assert_eq!("5".parse::<QuadElem>().unwrap(), QuadElem::rational(rat(5, 1)));
        assert!("1+2*sqrt(-3".parse::<QuadElem>().is_err());
    }

    #[test]
    fn inverse() {
        let x = q((5, 1), (8, 1), -11);
        assert_eq!(x.mul_ref(&x.inv().unwrap()), QuadElem::one());
        assert!(QuadElem::zero().inv().is_none());
    }

    fn small_quad(d: i64) -> impl Strategy<Value = QuadElem> {
        (-50i64..50, 1i64..10, -50i64..50, 1i64..10)
            .prop_map(move |(a, b, c, e)| QuadElem::new(rat(a, b), rat(c, e), d).unwrap())
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(x in small_quad(-3), y in small_quad(-3)) {
            prop_assert_eq!(x.mul_ref(&y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn conj_is_an_involution(x in small_quad(-11)) {
            prop_assert_eq!(x.conj().conj(), x);
        }

        #[test]
        fn text_round_trip(x in small_quad(-7)) {
            prop_assert_eq!(x.to_string().parse::<QuadElem>().unwrap(), x);
        }
    }
}

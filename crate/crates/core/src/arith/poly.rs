use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{parse_rational, Coefficient, Rational};
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// The highest stored coefficient is always nonzero; the zero polynomial
/// stores nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `X`.
    pub fn x() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    /// `X - root`
    pub fn linear_root(root: C) -> Self {
        Self::new(vec![-root, C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> C {
        self.coeffs.get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x);
            acc.add_assign_ref(c);
        }
        acc
    }

    /// Horner evaluation in a ring `T` that `C` embeds into.
    pub fn eval_in<T: Coefficient>(&self, x: &T, embed: impl Fn(&C) -> T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x);
            acc.add_assign_ref(&embed(c));
        }
        acc
    }

    pub fn map<T: Coefficient>(&self, f: impl Fn(&C) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul_ref(s)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_ref(&C::from_i64(i as i64)))
                .collect(),
        )
    }

    /// Euclidean division; needs an invertible leading coefficient in the divisor.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(lead) = divisor.leading() else {
            return Err(Error::domain("polynomial division by zero"));
        };
        let inv = lead
            .try_inv()
            .ok_or_else(|| Error::domain("divisor leading coefficient is not invertible"))?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![C::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].mul_ref(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j].sub_assign_ref(&c.mul_ref(d));
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }
}

impl Polynomial<Rational> {
    /// Least common denominator and the integer polynomial `lcd · self`.
    pub fn to_integer_coeffs(&self) -> (BigInt, Vec<BigInt>) {
        let lcd = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcd / c.denom()))
            .collect();
        (lcd, ints)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    ///
    /// Runs a primitive polynomial remainder sequence over ℤ so intermediate
    /// coefficients stay bounded by the content-free remainders.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = primitive_part(self.to_integer_coeffs().1);
        let mut b = primitive_part(other.to_integer_coeffs().1);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = primitive_part(pseudo_rem(&a, &b));
            a = b;
            b = r;
        }
        let Some(lead) = a.last().cloned() else {
            return Self::zero();
        };
        Self::new(
            a.into_iter()
                .map(|c| Rational::new(c, lead.clone()))
                .collect(),
        )
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// All rational roots, found by the rational-root test on the integer
    /// polynomial. Only practical for modest leading and constant terms.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let (_, ints) = self.to_integer_coeffs();
        let ints = primitive_part(ints);
        if ints.is_empty() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let mut tail = ints.as_slice();
        while tail.first().is_some_and(|c| c.is_zero()) {
            tail = &tail[1..];
            if !roots.contains(&Rational::zero()) {
                roots.push(Rational::zero());
            }
        }
        let Some(c0) = tail.first() else {
            return roots;
        };
        let lead = tail.last().unwrap();
        let ps = small_divisors(c0);
        let qs = small_divisors(lead);
        let (Some(ps), Some(qs)) = (ps, qs) else {
            return roots;
        };
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let r = Rational::new(p * sign, q.clone());
                    if !roots.contains(&r) && self.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Human-readable form such as `X^2 - 10*X + 729`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "X".into(),
                _ => format!("X^{i}"),
            };
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive_part(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        return p;
    }
    let mut g = content(&p);
    if p.last().unwrap().is_negative() {
        g = -g;
    }
    p.into_iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of `a` by `b` (both nonzero, trimmed).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    let n: u64 = n.try_into().ok()?;
    if n > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = self.coeff(i);
            if let Some(r) = rhs.coeffs.get(i) {
                c.add_assign_ref(r);
            }
            out.push(c);
        }
        Polynomial::new(out)
    }
}

impl<C: Coefficient> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j].mul_add_assign(a, b);
            }
        }
        Polynomial::new(out)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for Polynomial<C> {
            type Output = Polynomial<C>;
            fn $m(self, rhs: Self) -> Polynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Coefficient> Neg for Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

/// Coefficient list, lowest degree first: `[c0, c1, ..., cn]`.
impl<C: Coefficient> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for Polynomial<Rational> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        inner
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, QuadElem};
    use proptest::prelude::*;

    type P = Polynomial<Rational>;

    fn sample_b() -> P {
        let f1 = P::from_i64s(&[729, -10, 1]);
        let f2 = P::from_i64s(&[729, 46, 1]);
        &f1.pow(3) * &f2.pow(3)
    }

    #[test]
    fn identity_polynomial() {
        assert_eq!(P::x().eval(&rat(5, 1)), rat(5, 1));
    }

    #[test]
    fn b_at_minus_27() {
        let b = sample_b();
        assert_eq!(b.degree(), Some(12));
        assert_eq!(b.eval(&rat(-27, 1)), Rational::from_integer(BigInt::from(72).pow(9)));
    }

    #[test]
    fn eval_at_quadratic_point() {
        let f1 = P::from_i64s(&[729, -10, 1]);
        let x: QuadElem = "5+8*sqrt(-11)".parse().unwrap();
        assert!(f1.eval_in(&x, |c| QuadElem::rational(c.clone())).is_zero());
    }

    #[test]
    fn gcd_and_square_freeness() {
        let f1 = P::from_i64s(&[729, -10, 1]);
        let f2 = P::from_i64s(&[729, 46, 1]);
        let g = (&f1 * &f2).gcd(&(&f1 * &P::from_i64s(&[3, 1])));
        assert_eq!(g, f1);
        assert_eq!(f1.gcd(&f2), P::from_i64s(&[1]));
        assert!(!sample_b().is_square_free());
        assert!((&f1 * &f2).is_square_free());
        assert!(P::zero().gcd(&P::zero()).is_zero());
    }

    #[test]
    fn rational_roots_found() {
        // (2X - 1)(X + 27)(X^2 + 1)
        let p = &(&P::from_i64s(&[-1, 2]) * &P::from_i64s(&[27, 1])) * &P::from_i64s(&[1, 0, 1]);
        assert_eq!(p.rational_roots(), vec![rat(-27, 1), rat(1, 2)]);
        assert!(P::from_i64s(&[729, -10, 1]).rational_roots().is_empty());
    }

    #[test]
    fn division() {
        let b = sample_b();
        let f1 = P::from_i64s(&[729, -10, 1]);
        let (q, r) = b.div_rem(&f1).unwrap();
        assert!(r.is_zero());
        assert_eq!(&q * &f1, b);
        assert!(b.div_rem(&P::zero()).is_err());
    }

    #[test]
    fn text_formats() {
        let p = P::from_i64s(&[729, -10, 1]);
        assert_eq!(p.to_string(), "[729, -10, 1]");
        assert_eq!(p.pretty(), "X^2 - 10*X + 729");
        assert_eq!("[729, -10, 1]".parse::<P>().unwrap(), p);
        assert_eq!(P::from_i64s(&[-736, 1]).pretty(), "X - 736");
    }

    fn small_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-20i64..20, 1i64..5), 0..6)
            .prop_map(|v| P::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism(f in small_poly(), g in small_poly(), x in -9i64..9) {
            let x = rat(x, 1);
            prop_assert_eq!((&f + &g).eval(&x), f.eval(&x) + g.eval(&x));
            prop_assert_eq!((&f * &g).eval(&x), f.eval(&x) * g.eval(&x));
        }

        #[test]
        fn gcd_divides_both(f in small_poly(), g in small_poly(), h in small_poly()) {
            let a = &f * &h;
            let b = &g * &h;
            let d = a.gcd(&b);
            if !d.is_zero() {
                prop_assert!(a.div_rem(&d).unwrap().1.is_zero());
                prop_assert!(b.div_rem(&d).unwrap().1.is_zero());
                if !h.is_zero() {
                    prop_assert!(d.div_rem(&h.scale(&h.leading().unwrap().recip())).unwrap().1.is_zero());
                }
            }
        }
    }
}

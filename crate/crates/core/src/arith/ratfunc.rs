use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{Polynomial, Rational, RationalEmbedding};
use crate::error::{Error, Result};

/// Quotient `num / den` of polynomials, kept coprime with integer
/// coefficients, joint content 1 and positive leading denominator coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: Polynomial<Rational>,
    den: Polynomial<Rational>,
}

impl RationalFunction {
    pub fn new(num: Polynomial<Rational>, den: Polynomial<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::domain("rational function with zero denominator"));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        } else {
            (num, den)
        };
        Ok(Self::normalized(num, den))
    }

    /// Builds `num / Π fᵢ^eᵢ`, cancelling common factors by trial division.
    ///
    /// Cheaper than a full gcd when the denominator factors are known. Only
    /// the factors themselves are tried, so they should be irreducible (or at
    /// least coprime to anything in `num` that is not one of them).
    pub fn from_factored(
        mut num: Polynomial<Rational>,
        factors: &[(Polynomial<Rational>, u32)],
    ) -> Result<Self> {
        let mut den = Polynomial::constant(Rational::one());
        for (f, e) in factors {
            if f.degree().unwrap_or(0) == 0 {
                return Err(Error::domain("denominator factor must be nonconstant"));
            }
            let mut left = *e;
            while left > 0 && !num.is_zero() {
                let (q, r) = num.div_rem(f)?;
                if !r.is_zero() {
                    break;
                }
                num = q;
                left -= 1;
            }
            den = &den * &f.pow(left);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn polynomial(p: Polynomial<Rational>) -> Self {
        Self::normalized(p, Polynomial::constant(Rational::one()))
    }

    fn normalized(num: Polynomial<Rational>, den: Polynomial<Rational>) -> Self {
        if num.is_zero() {
            return Self {
                num,
                den: Polynomial::constant(Rational::one()),
            };
        }
        let (ln, n) = num.to_integer_coeffs();
        let (ld, d) = den.to_integer_coeffs();
        // num/den = (n/ln)/(d/ld) = (n·ld)/(d·ln)
        let mut n: Vec<BigInt> = n.into_iter().map(|c| c * &ld).collect();
        let mut d: Vec<BigInt> = d.into_iter().map(|c| c * &ln).collect();
        let mut g = n
            .iter()
            .chain(d.iter())
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if d.last().unwrap().is_negative() {
            g = -g;
        }
        for c in n.iter_mut().chain(d.iter_mut()) {
            *c /= &g;
        }
        let lift = |v: Vec<BigInt>| Polynomial::new(v.into_iter().map(Rational::from_integer).collect());
        Self {
            num: lift(n),
            den: lift(d),
        }
    }

    pub fn num(&self) -> &Polynomial<Rational> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<Rational> {
        &self.den
    }

    pub fn eval<C: RationalEmbedding>(&self, x: &C) -> Result<C> {
        let d = self.den.eval_in(x, C::from_rational);
        let Some(inv) = d.try_inv() else {
            return Err(Error::Pole(x.to_string()));
        };
        Ok(self.num.eval_in(x, C::from_rational).mul_ref(&inv))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.num, self.den)
    }
}

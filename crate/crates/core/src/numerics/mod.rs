//! Arbitrary-precision real and complex floats, Γ at rationals, η and j₃ at
//! CM points, and recognition of algebraic numbers of degree at most two.

mod cm;
mod gamma;

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::Rational;

pub use cm::{
    chowla_selberg, eta_product_at_zu, eval_eta, eval_j3, minimal_poly_from_values, recognize_algebraic,
    CMPoint, Recognized, RECOGNITION_TOL_BITS,
};
pub use gamma::{bernoulli, gamma_rational};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary float carrying its working precision in bits.
#[derive(Clone, Debug)]
pub struct BigReal {
    v: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        Self { v, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(0, prec), prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, prec.max(64)), prec)
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, prec.max(64)), prec)
    }

    /// Exact conversion (the mantissa grows with the integer).
    pub fn from_bigint(x: &BigInt, prec: usize) -> Self {
        if x.is_zero() {
            return Self::zero(prec);
        }
        let words = x.magnitude().to_u64_digits();
        let sign = if x.is_negative() { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        Self::wrap(BigFloat::from_words(&words, sign, e), prec)
    }

    pub fn from_rational(x: &Rational, prec: usize) -> Self {
        let n = Self::from_bigint(x.numer(), prec);
        let d = Self::from_bigint(x.denom(), prec);
        &n / &d
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_cc(|cc| cc.pi(prec, RM)), prec)
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        Self::wrap(self.v.add(&BigFloat::from_i64(0, 64), prec, RM), prec)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.prec, RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.exp(self.prec, RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.ln(self.prec, RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.sin(self.prec, RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.cos(self.prec, RM, cc)), self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.prec, RM), self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        let half = BigFloat::from_f64(0.5, 64);
        let t = if self.v.is_negative() {
            self.v.sub(&half, self.prec + 64, RM).ceil()
        } else {
            self.v.add(&half, self.prec + 64, RM).floor()
        };
        float_to_bigint(&t)
    }

    pub fn to_f64(&self) -> f64 {
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let top = match m.last() {
            Some(&w) if w != 0 => w,
            _ => return 0.0,
        };
        let x = top as f64 * 2f64.powi(e - 64);
        if s == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// `log₂|x|` to within one unit, `None` for zero.
    pub fn log2_abs(&self) -> Option<i64> {
        if self.v.is_zero() {
            return None;
        }
        self.v.exponent().map(|e| e as i64)
    }

    /// True when `self` rounds to the decimal string `printed` at its last
    /// printed place.
    pub fn agrees_with_decimal(&self, printed: &str) -> bool {
        let places = printed.split_once('.').map_or(0, |(_, f)| f.len());
        let Ok(digits) = printed.replace('.', "").parse::<BigInt>() else {
            return false;
        };
        let v = Rational::new(digits, BigInt::from(10).pow(places as u32));
        let half_ulp = Rational::new(1.into(), BigInt::from(2) * BigInt::from(10).pow(places as u32));
        let err = (self - &BigReal::from_rational(&v, self.prec)).abs();
        err <= BigReal::from_rational(&half_ulp, self.prec)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let bits = ((digits as f64) * 3.33).ceil() as usize + 8;
        let v = self.v.add(&BigFloat::from_i64(0, 64), bits.max(64), RM);
        let s = with_cc(|cc| v.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        trim_decimal(&s, digits)
    }
}

fn trim_decimal(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant),
    };
    let ds: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let ds: String = ds.chars().take(digits).collect();
    let point = mant.find('.').unwrap_or(mant.len()) as i64 + exp;
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-point) as usize));
        out.push_str(&ds);
    } else if point as usize >= ds.len() {
        out.push_str(&ds);
        out.extend(std::iter::repeat_n('0', point as usize - ds.len()));
    } else {
        out.push_str(&ds[..point as usize]);
        out.push('.');
        out.push_str(&ds[point as usize..]);
    }
    out
}

fn float_to_bigint(x: &BigFloat) -> BigInt {
    let Some((m, _, s, e, _)) = x.as_raw_parts() else {
        return BigInt::zero();
    };
    let mag = BigUint::from_slice(
        &m.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
    );
    let width = 64 * m.len() as i64;
    let e = e as i64;
    let mag = if e >= width { mag << (e - width) as usize } else { mag >> (width - e) as usize };
    let v = BigInt::from(mag);
    if s == Sign::Neg {
        -v
    } else {
        v
    }
}

macro_rules! real_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $f(self, o: &BigReal) -> BigReal {
                let p = self.prec.max(o.prec);
                BigReal::wrap(self.v.$f(&o.v, p, RM), p)
            }
        }
        impl $tr for BigReal {
            type Output = BigReal;
            fn $f(self, o: BigReal) -> BigReal {
                (&self).$f(&o)
            }
        }
    };
}
real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl PartialEq for BigReal {
    fn eq(&self, o: &Self) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or((self.prec as f64 * 0.301) as usize);
        f.write_str(&self.to_decimal(digits))
    }
}

/// Complex float `re + i·im`; both parts share the precision.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec;
        Self { re, im: BigReal::zero(p) }
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Self::from_real(BigReal::from_i64(x, prec))
    }

    pub fn prec(&self) -> usize {
        self.re.prec.max(self.im.prec)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    /// `e^{self}`.
    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        Self::new(&r * &self.im.cos(), &r * &self.im.sin())
    }

    pub fn scale(&self, s: &BigReal) -> Self {
        Self::new(&self.re * s, &self.im * s)
    }

    pub fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { Self::from_i64(1, self.prec()) / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::from_i64(1, self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
}

impl Div<&BigComplex> for &BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        let t = self * &o.conj();
        BigComplex::new(&t.re / &n, &t.im / &n)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

macro_rules! owned_complex {
    ($tr:ident, $f:ident) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $f(self, o: BigComplex) -> BigComplex {
                (&self).$f(&o)
            }
        }
    };
}
owned_complex!(Add, add);
owned_complex!(Sub, sub);
owned_complex!(Mul, mul);
owned_complex!(Div, div);

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or((self.prec() as f64 * 0.301) as usize);
        let im = self.im.to_decimal(digits);
        match im.strip_prefix('-') {
            Some(m) => write!(f, "{} - {}i", self.re.to_decimal(digits), m),
            None => write!(f, "{} + {}i", self.re.to_decimal(digits), im),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn integer_round_trip() {
        for s in ["0", "5", "-12345", "123456789012345678901234567890123", "-18446744073709551616"] {
            let x: BigInt = s.parse().unwrap();
            let f = BigReal::from_bigint(&x, 256);
            assert_eq!(f.round(), x, "{s}");
        }
        let h = BigReal::from_rational(&rat(-7, 2), 128);
        assert_eq!(h.round(), BigInt::from(-4));
        assert_eq!(BigReal::from_rational(&rat(1, 3), 128).round(), BigInt::zero());
    }

    #[test]
    fn decimal_rendering() {
        let p = BigReal::pi(256);
        assert_eq!(p.to_decimal(10), "3.141592653");
        assert_eq!(BigReal::from_rational(&rat(1, 800), 128).to_decimal(3), "0.00125");
        assert_eq!(BigReal::from_i64(-4200, 128).to_decimal(5), "-4200");
        assert!((BigReal::from_rational(&rat(-3, 8), 64).to_f64() + 0.375).abs() < 1e-15);
        assert!(BigReal::from_rational(&rat(-2, 3), 128).agrees_with_decimal("-0.667"));
        assert!(!BigReal::from_rational(&rat(-2, 3), 128).agrees_with_decimal("-0.666"));
    }

    #[test]
    fn complex_field_ops() {
        let a = BigComplex::new(BigReal::from_i64(3, 128), BigReal::from_i64(4, 128));
        assert_eq!(a.abs().round(), BigInt::from(5));
        let b = &a / &a;
        assert!((b.re.to_f64() - 1.0).abs() < 1e-30 && b.im.to_f64().abs() < 1e-30);
        let c = a.powi(-2);
        let back = &c * &(&a * &a);
        assert!((back.re.to_f64() - 1.0).abs() < 1e-30);
    }
}

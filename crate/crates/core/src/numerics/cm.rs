use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use super::{BigComplex, BigReal};
use crate::arith::{rat, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::numerics::gamma_rational;

/// Default recognition tolerance is `2^-RECOGNITION_TOL_BITS` (capped at
/// half the working precision).
pub const RECOGNITION_TOL_BITS: usize = 128;

/// Root `τ = (−b + √D)/(2a)` in the upper half-plane of `[a, b, c]`,
/// `D = b² − 4ac < 0`, `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CMPoint {
    a: i64,
    b: i64,
    c: i64,
}

impl CMPoint {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a <= 0 || b * b - 4 * a * c >= 0 {
            return Err(Error::domain(format!("[{a},{b},{c}] is not positive definite")));
        }
        Ok(Self { a, b, c })
    }

    /// `z_U = (3 + √−3)/6`, the root of `[3, −3, 1]`.
    pub fn z_u() -> Self {
        Self { a: 3, b: -3, c: 1 }
    }

    pub fn form(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn content(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn primitive(&self) -> Self {
        let g = self.content();
        Self { a: self.a / g, b: self.b / g, c: self.c / g }
    }

    pub fn imag_f64(&self) -> f64 {
        ((-self.disc()) as f64).sqrt() / (2 * self.a) as f64
    }

    pub fn tau(&self, prec: usize) -> BigComplex {
        let den = BigReal::from_i64(2 * self.a, prec);
        let re = &BigReal::from_i64(-self.b, prec) / &den;
        let im = &BigReal::from_i64(-self.disc(), prec).sqrt() / &den;
        BigComplex::new(re, im)
    }
}

impl fmt::Display for CMPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl std::str::FromStr for CMPoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let v: Vec<i64> = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::parse(format!("bad quadratic form {s:?}")))?;
        match v[..] {
            [a, b, c] => Self::new(a, b, c),
            _ => Err(Error::parse(format!("quadratic form needs three entries: {s:?}"))),
        }
    }
}

/// `η(τ) = q^{1/24} Σ_k (−1)^k q^{k(3k−1)/2}` for `Im τ > 0`.
pub fn eval_eta(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    let y = tau.im.to_f64();
    if !(y > 0.0) {
        return Err(Error::domain("η needs Im τ > 0"));
    }
    // |η| ≈ e^{−π/(12y)}/√y near the real line
    let loss = (std::f64::consts::PI / (12.0 * y) / std::f64::consts::LN_2).ceil() as usize;
    let w = prec + 64 + loss;
    let tau = BigComplex::new(tau.re.with_prec(w), tau.im.with_prec(w));
    let two_pi_i = BigComplex::new(BigReal::zero(w), &BigReal::pi(w) * &BigReal::from_i64(2, w));
    let q = (&two_pi_i * &tau).exp();
    let log2_q = -2.0 * std::f64::consts::PI * y / std::f64::consts::LN_2;
    let q3 = &(&q * &q) * &q;
    let mut sum = BigComplex::from_i64(1, w);
    let mut step = q.clone(); // q^{3k−2}
    let mut pent = BigComplex::from_i64(1, w); // q^{k(3k−1)/2}
    let mut qk = BigComplex::from_i64(1, w); // q^k
    for k in 1i64.. {
        pent = &pent * &step;
        qk = &qk * &q;
        let pair = &pent + &(&pent * &qk);
        sum = if k % 2 == 1 { &sum - &pair } else { &sum + &pair };
        step = &step * &q3;
        let e = (k * (3 * k - 1) / 2) as f64;
        if e * log2_q < -(w as f64) - 8.0 {
            break;
        }
    }
    let pre = (&two_pi_i * &tau.scale(&BigReal::from_rational(&rat(1, 24), w))).exp();
    let r = &pre * &sum;
    Ok(BigComplex::new(r.re.with_prec(prec), r.im.with_prec(prec)))
}

/// `j₃(τ) = (η(τ)/η(3τ))¹²`.
pub fn eval_j3(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    let w = prec + 32;
    let three = BigReal::from_i64(3, w);
    let e1 = eval_eta(tau, w)?;
    let e3 = eval_eta(&tau.scale(&three), w)?;
    let r = (&e1 / &e3).powi(12);
    Ok(BigComplex::new(r.re.with_prec(prec), r.im.with_prec(prec)))
}

/// `η(z_U)⁶ η(3z_U)⁶`.
pub fn eta_product_at_zu(prec: usize) -> Result<BigComplex> {
    let w = prec + 32;
    let tau = CMPoint::z_u().tau(w);
    let e1 = eval_eta(&tau, w)?;
    let e3 = eval_eta(&tau.scale(&BigReal::from_i64(3, w)), w)?;
    let r = (&e1 * &e3).powi(6);
    Ok(BigComplex::new(r.re.with_prec(prec), r.im.with_prec(prec)))
}

/// Chowla–Selberg period `Ω₋₃ = (Γ(1/3)/Γ(2/3))^{3/2}/√(6π)`.
pub fn chowla_selberg(prec: usize) -> Result<BigReal> {
    let w = prec + 32;
    let ratio = &gamma_rational(&rat(1, 3), w)? / &gamma_rational(&rat(2, 3), w)?;
    let six_pi = &BigReal::pi(w) * &BigReal::from_i64(6, w);
    Ok((&(&ratio * &ratio.sqrt()) / &six_pi.sqrt()).with_prec(prec))
}

fn tolerance(prec: usize) -> BigReal {
    let bits = RECOGNITION_TOL_BITS.min(prec / 2) as i64;
    BigReal::from_rational(&Rational::new(BigInt::one(), BigInt::one() << bits), prec)
}

fn max_abs(a: &BigInt, b: &BigInt) -> BigInt {
    a.abs().max(b.abs()).max(BigInt::one())
}

/// Best rational approximation `h/k` with `|k·y − h| ≤ tol·max(|h|, k)` and
/// height at most `bound`, found among the continued-fraction convergents.
fn recognize_rational(y: &BigReal, bound: &BigInt, tol: &BigReal) -> Option<Rational> {
    let p = y.prec();
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    let mut r = y.clone();
    for _ in 0..p {
        let a = floor(&r);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if h.abs() > *bound || k > *bound {
            return None;
        }
        let resid = (&(y * &BigReal::from_bigint(&k, p)) - &BigReal::from_bigint(&h, p)).abs();
        if resid <= &BigReal::from_bigint(&max_abs(&h, &k), p) * tol {
            return Some(Rational::new(h, k));
        }
        let frac = &r - &BigReal::from_bigint(&a, p);
        if frac.is_zero() {
            return None;
        }
        r = &BigReal::from_i64(1, p) / &frac;
        (h2, h1) = (h1, h);
        (k2, k1) = (k1, k);
    }
    None
}

fn floor(x: &BigReal) -> BigInt {
    let n = x.round();
    if BigReal::from_bigint(&n, x.prec()) > *x {
        n - 1
    } else {
        n
    }
}

/// A recognized minimal polynomial and its normalized residual `|p(x)|/H(p)`.
#[derive(Clone, Debug)]
pub struct Recognized {
    pub poly: Polynomial<Rational>,
    pub residual: BigReal,
}

/// Smallest-height primitive integer polynomial of degree ≤ `max_degree ≤ 2`
/// vanishing at `x` (and `x̄`) within tolerance.
pub fn recognize_algebraic(x: &BigComplex, max_degree: u32, height_bound: &BigInt) -> Result<Recognized> {
    let p = x.prec();
    let tol = tolerance(p);
    let scale = &x.re.abs() + &BigReal::from_i64(1, p);
    let real = x.im.abs() <= &tol * &scale;
    let fail = || Error::Recognition(format!("no polynomial of degree ≤ {max_degree} and height ≤ {height_bound} fits {x:.30}"));
    let poly = if real {
        let r = recognize_rational(&x.re, height_bound, &tol).ok_or_else(fail)?;
        Polynomial::new(vec![-Rational::from_integer(r.numer().clone()), Rational::from_integer(r.denom().clone())])
    } else {
        if max_degree < 2 {
            return Err(fail());
        }
        let two = BigReal::from_i64(2, p);
        let t = recognize_rational(&(&x.re * &two), height_bound, &tol).ok_or_else(fail)?;
        let n = recognize_rational(&x.norm_sqr(), height_bound, &tol).ok_or_else(fail)?;
        let a = t.denom().lcm(n.denom());
        let a = Rational::from_integer(a);
        let c = vec![&n * &a, -(&t * &a), a];
        let g = c.iter().fold(BigInt::zero(), |g, v| g.gcd(v.numer()));
        let c: Vec<Rational> = c.into_iter().map(|v| v / Rational::from_integer(g.clone())).collect();
        if c.iter().any(|v| v.numer().abs() > *height_bound) {
            return Err(fail());
        }
        Polynomial::new(c)
    };
    let height = poly.coeffs().iter().map(|c| c.numer().abs()).max().unwrap_or_default();
    let v = eval_complex(&poly, x);
    let residual = &v.abs() / &BigReal::from_bigint(&height, p);
    if residual > tol {
        return Err(fail());
    }
    Ok(Recognized { poly, residual })
}

fn eval_complex(poly: &Polynomial<Rational>, x: &BigComplex) -> BigComplex {
    let p = x.prec();
    poly.coeffs().iter().rev().fold(BigComplex::from_i64(0, p), |acc, c| {
        &(&acc * x) + &BigComplex::from_real(BigReal::from_rational(c, p))
    })
}

/// `Π (X − vᵢ)` rounded to an integer polynomial. Fails with a precision
/// error when some coefficient is further than `2^{−prec/4}` from an
/// integer, so the caller can retry with more bits.
pub fn minimal_poly_from_values(values: &[BigComplex]) -> Result<(Polynomial<Rational>, BigReal)> {
    let p = values.iter().map(BigComplex::prec).max().unwrap_or(64);
    let mut acc = vec![BigComplex::from_i64(1, p)];
    for v in values {
        let mut next = vec![BigComplex::from_i64(0, p); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = &next[i + 1] + c;
            next[i] = &next[i] - &(c * v);
        }
        acc = next;
    }
    let mut worst = BigReal::zero(p);
    let mut coeffs = Vec::with_capacity(acc.len());
    for c in &acc {
        let n = c.re.round();
        let err = (&c.re - &BigReal::from_bigint(&n, p)).abs();
        let err = if c.im.abs() > err { c.im.abs() } else { err };
        if err > worst {
            worst = err;
        }
        coeffs.push(Rational::from_integer(n));
    }
    let tol = BigReal::from_rational(&Rational::new(BigInt::one(), BigInt::one() << (p / 4)), p);
    if worst > tol {
        return Err(Error::precision(format!(
            "class polynomial of degree {} misses integers by 2^{} at {p} bits",
            values.len(),
            worst.log2_abs().unwrap_or(0)
        )));
    }
    Ok((Polynomial::new(coeffs), worst))
}

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::BigReal;
use crate::arith::Rational;
use crate::error::{Error, Result};

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli numbers `B₀ … B_n` with `B₁ = −1/2`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() <= n {
        let m = cache.len();
        if m == 0 {
            cache.push(Rational::one());
            continue;
        }
        // Σ_{k<m+1} C(m+1, k) B_k = 0
        let mut binom = BigInt::one();
        let mut s = Rational::zero();
        for (k, b) in cache.iter().enumerate() {
            s += b * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        cache.push(-s / Rational::from_integer(binom));
    }
    cache[..=n].to_vec()
}

/// `Γ(x)` for rational `x > 0`, by shifting to `x + N` and summing the
/// Stirling series until its terms drop below the working precision.
pub fn gamma_rational(x: &Rational, prec: usize) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(Error::domain("Γ is only evaluated at positive rationals"));
    }
    let w = prec + 32;
    let shift = (w / 4).max(12) as i64;
    let z = x + Rational::from_integer(shift.into());
    let mut pochhammer = Rational::one();
    for i in 0..shift {
        pochhammer *= x + Rational::from_integer(i.into());
    }
    let zf = BigReal::from_rational(&z, w);
    let half = BigReal::from_rational(&Rational::new(1.into(), 2.into()), w);
    let two_pi = &BigReal::pi(w) * &BigReal::from_i64(2, w);
    let mut lg = &(&(&zf - &half) * &zf.ln()) - &zf;
    lg = &lg + &(&half * &two_pi.ln());
    let kmax = w / 4 + 8;
    let b = bernoulli(2 * kmax);
    let z2 = &zf * &zf;
    let mut zpow = zf.clone();
    let cutoff = -(w as i64) - 4;
    for k in 1..=kmax {
        let c = &b[2 * k] / Rational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = &BigReal::from_rational(&c, w) / &zpow;
        lg = &lg + &term;
        if term.log2_abs().is_none_or(|e| e < cutoff) {
            break;
        }
        zpow = &zpow * &z2;
    }
    let g = &lg.exp() / &BigReal::from_rational(&pochhammer, w);
    Ok(g.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn gamma_known_values() {
        let g = gamma_rational(&rat(1, 2), 256).unwrap();
        let sqrt_pi = BigReal::pi(256).sqrt();
        let err = (&g - &sqrt_pi).abs();
        assert!(err.log2_abs().is_none_or(|e| e < -240), "{err}");
        let five = gamma_rational(&rat(5, 1), 128).unwrap();
        assert_eq!(five.round(), BigInt::from(24));
        assert!(gamma_rational(&rat(0, 1), 64).is_err());
    }

    #[test]
    fn reflection_at_one_third() {
        let p = 256;
        let a = gamma_rational(&rat(1, 3), p).unwrap();
        let b = gamma_rational(&rat(2, 3), p).unwrap();
        let three = BigReal::from_i64(3, p);
        let rhs = &(&BigReal::pi(p) * &BigReal::from_i64(2, p)) / &three.sqrt();
        let err = (&(&a * &b) - &rhs).abs();
        assert!(err.log2_abs().is_none_or(|e| e < -240));
    }
}

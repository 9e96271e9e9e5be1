//! Truncated Laurent series in a fractional power of q.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arith::{Coefficient, Rational};
use crate::error::{Error, Result};

/// `Σ c_n q^{n/den}`, known exactly below `q^{trunc/den}`.
///
/// `trunc == None` means the series is exact (a finite Laurent polynomial).
/// Stored terms are nonzero and lie below the truncation. `den` is not kept
/// minimal; comparisons normalize.
#[derive(Clone, Debug)]
pub struct PuiseuxSeries<C> {
    den: i64,
    terms: BTreeMap<i64, C>,
    trunc: Option<i64>,
}

/// gcd of all stored offsets from the given base points (and of the
/// truncation offsets), at least 1.
fn offsets_gcd<C>(series: &[&PuiseuxSeries<C>], base: &[i64]) -> i64 {
    let mut g = 0i64;
    for (s, v) in series.iter().zip(base) {
        for n in s.terms.keys().chain(s.trunc.iter()) {
            g = g.gcd(&(n - v));
        }
    }
    g.max(1)
}

fn has_dense_mul<C: Coefficient>() -> bool {
    C::dense_mul(&[], &[], 0).is_some()
}

/// First `len` coefficients of `1/g` by Newton iteration `h ← h(2 − g·h)`.
fn newton_inverse<C: Coefficient>(g: &[C], inv0: C, len: usize) -> Vec<C> {
    let mut h = vec![inv0];
    while h.len() < len {
        let k = (2 * h.len()).min(len);
        let mut e = C::dense_mul(&g[..k], &h, k).expect("dense product available");
        e[0].sub_assign_ref(&C::one());
        let corr = C::dense_mul(&h, &e, k).expect("dense product available");
        h.resize(k, C::zero());
        for (x, c) in h.iter_mut().zip(&corr) {
            x.sub_assign_ref(c);
        }
    }
    h
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

impl<C: Coefficient> PuiseuxSeries<C> {
    pub fn new(den: i64, terms: impl IntoIterator<Item = (i64, C)>, trunc: Option<i64>) -> Self {
        assert!(den > 0, "exponent denominator must be positive");
        let mut map = BTreeMap::new();
        for (n, c) in terms {
            if trunc.is_some_and(|t| n >= t) {
                continue;
            }
            let e = map.entry(n).or_insert_with(C::zero);
            C::add_assign_ref(e, &c);
        }
        map.retain(|_, c| !c.is_zero());
        Self {
            den,
            terms: map,
            trunc,
        }
    }

    /// `Σ_k coeffs[k] q^{(offset + step·k)/den} + O(q^{(offset + step·len)/den})`.
    pub fn from_dense(den: i64, offset: i64, step: i64, coeffs: Vec<C>) -> Self {
        let trunc = offset + step * coeffs.len() as i64;
        Self::new(
            den,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (offset + step * k as i64, c)),
            Some(trunc),
        )
    }

    pub fn zero() -> Self {
        Self::new(1, [], None)
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), &Rational::zero())
    }

    /// `c·q^e`, exact.
    pub fn monomial(c: C, e: &Rational) -> Self {
        let den: i64 = e.denom().try_into().expect("exponent denominator too large");
        let n: i64 = e.numer().try_into().expect("exponent too large");
        Self::new(den, [(n, c)], None)
    }

    /// Zero series known to be zero below `q^t`.
    pub fn big_o(t: &Rational) -> Self {
        let den: i64 = t.denom().try_into().expect("exponent denominator too large");
        let n: i64 = t.numer().try_into().expect("exponent too large");
        Self::new(den, [], Some(n))
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Stored terms as `(n, c)` meaning `c·q^{n/den}`, ascending.
    pub fn raw_terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    /// Terms with reduced rational exponents, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &C)> {
        let d = self.den;
        self.terms.iter().map(move |(n, c)| (ratio(*n, d), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn raw_trunc(&self) -> Option<i64> {
        self.trunc
    }

    /// Exponent below which the series is known, `None` if exact.
    pub fn trunc(&self) -> Option<Rational> {
        self.trunc.map(|t| ratio(t, self.den))
    }

    /// Exponent of the lowest stored term.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().map(|n| ratio(*n, self.den))
    }

    /// Lowest known exponent: the valuation, or the truncation for an
    /// unknown-but-zero-so-far series, or `None` for the exact zero.
    fn eff_val(&self) -> Option<i64> {
        self.terms.keys().next().copied().or(self.trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^e`; errors past the truncation instead of guessing zero.
    pub fn coeff(&self, e: &Rational) -> Result<C> {
        let scaled = e * Rational::from_integer(self.den.into());
        if let Some(t) = self.trunc {
            if scaled >= Rational::from_integer(t.into()) {
                return Err(Error::precision(format!(
                    "coefficient of q^{e} requested but series is only known below q^{}",
                    ratio(t, self.den)
                )));
            }
        }
        if !scaled.is_integer() {
            return Ok(C::zero());
        }
        let n: i64 = scaled.to_integer().try_into().expect("exponent too large");
        Ok(self.terms.get(&n).cloned().unwrap_or_else(C::zero))
    }

    /// Coefficient at raw index `n` (exponent `n/den`).
    pub fn raw_coeff(&self, n: i64) -> Result<C> {
        self.coeff(&ratio(n, self.den))
    }

    /// Same series over a multiple of the current exponent denominator.
    pub fn with_den(&self, den: i64) -> Self {
        assert!(den % self.den == 0, "target denominator must be a multiple");
        let k = den / self.den;
        if k == 1 {
            return self.clone();
        }
        Self {
            den,
            terms: self.terms.iter().map(|(n, c)| (n * k, c.clone())).collect(),
            trunc: self.trunc.map(|t| t * k),
        }
    }

    /// Same series over the smallest exponent denominator.
    pub fn normalized(&self) -> Self {
        // trunc joins the gcd so the known range never grows
        let mut g = self.den;
        for n in self.terms.keys().chain(self.trunc.iter()) {
            g = g.gcd(n);
        }
        if g == 1 {
            return self.clone();
        }
        Self {
            den: self.den / g,
            terms: self.terms.iter().map(|(n, c)| (n / g, c.clone())).collect(),
            trunc: self.trunc.map(|t| t / g),
        }
    }

    /// Forgets everything at and above `q^t`.
    pub fn truncate(&self, t: &Rational) -> Self {
        let l = self.den.lcm(&(t.denom().try_into().expect("denominator too large")));
        let s = self.with_den(l);
        let n: i64 = (t * Rational::from_integer(l.into()))
            .to_integer()
            .try_into()
            .expect("exponent too large");
        let trunc = Some(s.trunc.map_or(n, |old| old.min(n)));
        Self::new(l, s.terms, trunc)
    }

    /// Keeps `terms` integer q-steps past the lowest known exponent.
    pub fn with_terms(&self, terms: i64) -> Self {
        let Some(v) = self.eff_val() else {
            return self.clone();
        };
        let n = v + terms * self.den;
        let trunc = Some(self.trunc.map_or(n, |old| old.min(n)));
        Self::new(self.den, self.terms.clone(), trunc)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.den,
            self.terms.iter().map(|(n, x)| (*n, x.mul_ref(c))),
            self.trunc,
        )
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        let l = self.den.lcm(&(e.denom().try_into().expect("denominator too large")));
        let s = self.with_den(l);
        let k: i64 = (e * Rational::from_integer(l.into()))
            .to_integer()
            .try_into()
            .expect("exponent too large");
        Self {
            den: l,
            terms: s.terms.into_iter().map(|(n, c)| (n + k, c)).collect(),
            trunc: s.trunc.map(|t| t + k),
        }
    }

    /// Substitutes `q ↦ q^c` for a positive rational `c`.
    pub fn rescale(&self, c: &Rational) -> Self {
        assert!(c.is_positive(), "rescale factor must be positive");
        let p: i64 = c.numer().try_into().expect("factor too large");
        let q: i64 = c.denom().try_into().expect("factor too large");
        Self {
            den: self.den * q,
            terms: self.terms.iter().map(|(n, x)| (n * p, x.clone())).collect(),
            trunc: self.trunc.map(|t| t * p),
        }
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        PuiseuxSeries::new(
            self.den,
            self.terms.iter().map(|(n, c)| (*n, f(c))),
            self.trunc,
        )
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = self.den.lcm(&other.den);
        (self.with_den(l), other.with_den(l))
    }

    /// Single coefficient of `self · other` at `q^e` without forming the product.
    pub fn product_coeff(&self, other: &Self, e: &Rational) -> Result<C> {
        let (f, g) = self.common(other);
        let l = f.den;
        let t = f.mul_trunc(&g);
        let scaled = e * Rational::from_integer(l.into());
        if let Some(t) = t {
            if scaled >= Rational::from_integer(t.into()) {
                return Err(Error::precision(format!(
                    "product coefficient of q^{e} is beyond the known range q^{}",
                    ratio(t, l)
                )));
            }
        }
        if !scaled.is_integer() {
            return Ok(C::zero());
        }
        let n: i64 = scaled.to_integer().try_into().expect("exponent too large");
        let mut acc = C::zero();
        for (a, x) in &f.terms {
            if let Some(y) = g.terms.get(&(n - a)) {
                acc.mul_add_assign(x, y);
            }
        }
        Ok(acc)
    }

    fn mul_trunc(&self, other: &Self) -> Option<i64> {
        let (vf, vg) = (self.eff_val(), other.eff_val());
        let a = self.trunc.and_then(|t| vg.map(|v| t + v));
        let b = other.trunc.and_then(|t| vf.map(|v| t + v));
        match (a, b) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let (f, g) = self.common(other);
        let (Some(vf), Some(vg)) = (f.eff_val(), g.eff_val()) else {
            return Self::new(f.den, [], None);
        };
        let Some(t) = f.mul_trunc(&g) else {
            let mut out: BTreeMap<i64, C> = BTreeMap::new();
            for (a, x) in &f.terms {
                for (b, y) in &g.terms {
                    out.entry(a + b).or_insert_with(C::zero).mul_add_assign(x, y);
                }
            }
            return Self::new(f.den, out, None);
        };
        // Work in steps of the gcd of all exponent offsets so sparse residue
        // patterns (den 12 with one live class, say) cost nothing.
        let step = offsets_gcd(&[&f, &g], &[vf, vg]);
        let fl: Vec<(i64, &C)> = f
            .terms
            .range(..t - vg)
            .map(|(n, c)| ((n - vf) / step, c))
            .collect();
        let glen = ((t - vf - vg) / step).max(0) as usize;
        let mut gd: Vec<Option<&C>> = vec![None; glen];
        for (n, c) in g.terms.range(..t - vf) {
            gd[((n - vg) / step) as usize] = Some(c);
        }
        let gnnz = gd.iter().filter(|c| c.is_some()).count();
        if fl.len().min(gnnz) >= 16 && fl.len() * gnnz >= 8 * glen {
            let mut fa = vec![C::zero(); glen];
            for (i, c) in &fl {
                fa[*i as usize] = (*c).clone();
            }
            let gb: Vec<C> = gd.iter().map(|c| c.cloned().unwrap_or_else(C::zero)).collect();
            if let Some(coeffs) = C::dense_mul(&fa, &gb, glen) {
                return Self::new(
                    f.den,
                    coeffs
                        .into_iter()
                        .enumerate()
                        .map(|(k, c)| (vf + vg + k as i64 * step, c)),
                    Some(t),
                );
            }
        }
        let one_output = |k: usize| -> C {
            let mut acc = C::zero();
            for (i, x) in &fl {
                let i = *i as usize;
                if i > k {
                    break;
                }
                if let Some(y) = gd[k - i] {
                    acc.mul_add_assign(x, y);
                }
            }
            acc
        };
        // Each output sums in the same order either way, so the parallel
        // path is bit-identical to the sequential one.
        let coeffs: Vec<C> = if fl.len() * glen > 1 << 16 {
            (0..glen).into_par_iter().map(one_output).collect()
        } else {
            (0..glen).map(one_output).collect()
        };
        Self::new(
            f.den,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(k, c)| (vf + vg + k as i64 * step, c)),
            Some(t),
        )
    }

    /// `self / other` to the smaller of the two relative precisions.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let (f, g) = self.common(other);
        let Some((&vg, lead)) = g.terms.iter().next() else {
            return Err(Error::domain("division by a zero series"));
        };
        let inv0 = lead
            .try_inv()
            .ok_or_else(|| Error::domain(format!("leading coefficient {lead} is not invertible")))?;
        let Some(vf) = f.eff_val() else {
            return Ok(Self::new(f.den, [], None));
        };
        let rel = match (f.trunc.map(|t| t - vf), g.trunc.map(|t| t - vg)) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => {
                if g.terms.len() == 1 {
                    return Ok(Self::new(
                        f.den,
                        f.terms.iter().map(|(n, c)| (n - vg, c.mul_ref(&inv0))),
                        None,
                    ));
                }
                return Err(Error::domain(
                    "division by an exact non-monomial series needs a truncation",
                ));
            }
        };
        let step = offsets_gcd(&[&f, &g], &[vf, vg]).gcd(&rel.max(1));
        let len = (rel / step).max(0) as usize;
        let gl: Vec<(usize, &C)> = g
            .terms
            .iter()
            .skip(1)
            .map(|(n, c)| (((n - vg) / step) as usize, c))
            .take_while(|(k, _)| *k < len)
            .collect();
        let vh = vf - vg;
        if len > 64 && gl.len() >= 16 && has_dense_mul::<C>() {
            let mut gdense = vec![C::zero(); len];
            gdense[0] = lead.clone();
            for (j, c) in &gl {
                gdense[*j] = (*c).clone();
            }
            let mut fdense = vec![C::zero(); len];
            for (n, c) in f.terms.range(..vf + len as i64 * step) {
                fdense[((n - vf) / step) as usize] = c.clone();
            }
            let h = newton_inverse(&gdense, inv0, len);
            let q = C::dense_mul(&fdense, &h, len).expect("dense product available");
            return Ok(Self::new(
                f.den,
                q.into_iter()
                    .enumerate()
                    .map(|(k, c)| (vh + k as i64 * step, c)),
                Some(vh + rel),
            ));
        }
        let mut h: Vec<C> = Vec::with_capacity(len);
        for k in 0..len {
            let mut s = f
                .terms
                .get(&(vf + k as i64 * step))
                .cloned()
                .unwrap_or_else(C::zero);
            for (j, gj) in &gl {
                if *j > k {
                    break;
                }
                let hk = &h[k - j];
                if !hk.is_zero() {
                    s.sub_assign_ref(&gj.mul_ref(hk));
                }
            }
            h.push(s.mul_ref(&inv0));
        }
        Ok(Self::new(
            f.den,
            h.into_iter()
                .enumerate()
                .map(|(k, c)| (vh + k as i64 * step, c)),
            Some(vh + rel),
        ))
    }

    /// Multiplicative inverse to the same relative precision.
    pub fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Compares coefficients below the common truncation. Returns whether
    /// they agree and the exponent bound of the compared range (`None` when
    /// both sides are exact).
    pub fn compare(&self, other: &Self) -> (bool, Option<Rational>) {
        let (f, g) = self.common(other);
        let t = match (f.trunc, g.trunc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let below = |n: &i64| t.is_none_or(|t| *n < t);
        let keys: std::collections::BTreeSet<i64> = f
            .terms
            .keys()
            .chain(g.terms.keys())
            .copied()
            .filter(below)
            .collect();
        let zero = C::zero();
        let same = keys.iter().all(|n| {
            f.terms.get(n).unwrap_or(&zero) == g.terms.get(n).unwrap_or(&zero)
        });
        (same, t.map(|t| ratio(t, f.den)))
    }

    /// Canonical text dump: `exponent<TAB>coefficient` lines, then `O(q^{t})`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.terms() {
            out.push_str(&format!("{e}\t{c}\n"));
        }
        if let Some(t) = self.trunc() {
            out.push_str(&format!("O(q^{{{t}}})\n"));
        }
        out
    }
}

impl PuiseuxSeries<Rational> {
    /// Embeds an integer series.
    pub fn from_integer_series(s: &PuiseuxSeries<BigInt>) -> Self {
        s.map(|c| Rational::from_integer(c.clone()))
    }
}

impl<C: Coefficient> PartialEq for PuiseuxSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other).0
    }
}

impl<C: Coefficient> Add for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn add(self, rhs: Self) -> PuiseuxSeries<C> {
        let (mut f, g) = self.common(rhs);
        let trunc = match (f.trunc, g.trunc) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for (n, c) in g.terms {
            f.terms.entry(n).or_insert_with(C::zero).add_assign_ref(&c);
        }
        PuiseuxSeries::new(f.den, f.terms, trunc)
    }
}

impl<C: Coefficient> Neg for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        PuiseuxSeries {
            den: self.den,
            terms: self.terms.iter().map(|(n, c)| (*n, -c.clone())).collect(),
            trunc: self.trunc,
        }
    }
}

impl<C: Coefficient> Sub for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn sub(self, rhs: Self) -> PuiseuxSeries<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn mul(self, rhs: Self) -> PuiseuxSeries<C> {
        self.mul_impl(rhs)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for PuiseuxSeries<C> {
            type Output = PuiseuxSeries<C>;
            fn $m(self, rhs: Self) -> PuiseuxSeries<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Coefficient> Neg for PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        -&self
    }
}

impl<C: Coefficient> fmt::Display for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*q^({e})")?;
            }
        }
        match self.trunc() {
            Some(t) if first => write!(f, "O(q^({t}))"),
            Some(t) => write!(f, " + O(q^({t}))"),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    type S = PuiseuxSeries<Rational>;

    fn r(n: i64) -> Rational {
        rat(n, 1)
    }

    #[test]
    fn monomial_shift() {
        let f = S::new(1, [(-1, r(1)), (0, r(10))], None);
        let g = S::monomial(r(1), &r(1));
        let p = &f * &g;
        assert_eq!(p, S::new(1, [(0, r(1)), (1, r(10))], None));
        assert!(p.is_exact());
    }

    #[test]
    fn geometric_inverse() {
        let f = S::new(1, [(0, r(1)), (1, r(-1))], None).with_terms(20);
        let g = f.inv().unwrap();
        assert_eq!(g.trunc(), Some(r(20)));
        for n in 0..20 {
            assert_eq!(g.coeff(&r(n)).unwrap(), r(1));
        }
        let one = &f * &g;
        assert_eq!(one.trunc(), Some(r(20)));
        assert_eq!(one, S::one());
        assert_eq!(S::monomial(r(1), &r(1)).inv().unwrap(), S::monomial(r(1), &r(-1)));
        assert!(S::zero().inv().is_err());
        assert!(S::big_o(&r(3)).inv().is_err());
    }

    #[test]
    fn coeff_contract() {
        let f = S::from_dense(4, -4, 4, vec![r(1), r(10), r(0), r(0), r(-64)]);
        assert_eq!(f.coeff(&r(3)).unwrap(), r(-64));
        assert_eq!(f.coeff(&r(1)).unwrap(), r(0));
        assert_eq!(f.coeff(&rat(1, 4)).unwrap(), r(0));
        assert!(matches!(f.coeff(&r(4)), Err(Error::Precision(_))));
        assert!(f.coeff(&r(1_000_000)).is_err());
    }

    #[test]
    fn rescale_round_trip() {
        let f = S::new(1, [(-1, r(1)), (3, r(-64)), (7, r(-513))], Some(8));
        let g = f.rescale(&rat(1, 4));
        assert_eq!(g.coeff(&rat(-1, 4)).unwrap(), r(1));
        assert_eq!(g.coeff(&rat(3, 4)).unwrap(), r(-64));
        assert_eq!(g.coeff(&rat(7, 4)).unwrap(), r(-513));
        assert_eq!(g.trunc(), Some(r(2)));
        assert_eq!(g.rescale(&r(4)).normalized().dump(), f.dump());
        assert_eq!(f.rescale(&r(1)).dump(), f.dump());
    }

    #[test]
    fn truncation_propagation() {
        // (q^-1 + O(q^2)) * (q + O(q^3)) known below q^min(2+1, 3-1) = q^2
        let f = S::new(1, [(-1, r(1))], Some(2));
        let g = S::new(1, [(1, r(1))], Some(3));
        assert_eq!((&f * &g).trunc(), Some(r(2)));
        let z = S::big_o(&r(5));
        assert_eq!((&z * &g).trunc(), Some(r(6)));
        assert!((&S::zero() * &g).is_exact());
    }

    #[test]
    fn dump_format() {
        let f = S::new(3, [(-3, r(1)), (1, rat(-1, 2))], Some(6));
        assert_eq!(f.dump(), "-1\t1\n1/3\t-1/2\nO(q^{2})\n");
        let g = f.with_den(12);
        assert_eq!(g.dump(), f.dump());
    }

    #[test]
    fn compare_reports_range() {
        let f = S::new(1, [(0, r(1)), (5, r(3))], Some(10));
        let g = S::new(1, [(0, r(1))], Some(4));
        assert_eq!(f.compare(&g), (true, Some(r(4))));
        assert_ne!(f, S::new(1, [(0, r(2))], Some(4)));
    }

    #[test]
    fn product_coeff_matches_product() {
        let f = S::new(3, [(-2, r(1)), (1, r(-8)), (4, r(20))], Some(7));
        let g = S::new(4, [(-1, r(1)), (3, r(-64)), (7, r(-513))], Some(8));
        let p = &f * &g;
        for (e, c) in p.terms() {
            assert_eq!(&f.product_coeff(&g, &e).unwrap(), c);
        }
        assert!(f.product_coeff(&g, &r(5)).is_err());
    }

    fn sample() -> impl Strategy<Value = S> {
        (
            prop::sample::select(vec![1i64, 2, 3, 4, 12]),
            prop::collection::vec((-6i64..12, -9i64..9), 0..6),
            prop::option::weighted(0.8, 4i64..24),
        )
            .prop_map(|(den, terms, t)| {
                S::new(den, terms.into_iter().map(|(n, c)| (n, r(c))), t)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(f in sample(), g in sample(), h in sample()) {
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        }

        #[test]
        fn truncation_never_optimistic(f in sample(), g in sample(), extra in prop::collection::vec((0i64..40, -9i64..9), 0..6)) {
            // refine f and g by revealing arbitrary terms beyond their truncations
            let refine = |s: &S| {
                let t = s.raw_trunc();
                let more = extra.iter().filter_map(|(k, c)| t.map(|t| (t + k, r(*c))));
                S::new(s.den(), s.raw_terms().map(|(n, c)| (n, c.clone())).chain(more), t.map(|t| t + 40))
            };
            let p = &f * &g;
            let q = &refine(&f) * &refine(&g);
            let (same, _) = p.compare(&q);
            prop_assert!(same);
        }

        #[test]
        fn rescale_inverts(f in sample(), p in 1i64..6, q in 1i64..6) {
            let c = rat(p, q);
            let back = f.rescale(&c).rescale(&c.recip());
            prop_assert_eq!(back.normalized().dump(), f.normalized().dump());
        }
    }
}

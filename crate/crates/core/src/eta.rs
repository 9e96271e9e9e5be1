//! Dedekind eta quotients and the named scalar forms built from them.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{ToPrimitive, Zero};

use crate::arith::kron_mul;
use crate::error::{Error, Result};
use crate::IntegerSeries;

/// `Π η(m·z)^r` as a list of `(m, r)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EtaQuotientSpec {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotientSpec {
    pub fn new(factors: &[(u32, i32)]) -> Result<Self> {
        let mut seen = Vec::new();
        for &(m, _) in factors {
            if m == 0 {
                return Err(Error::domain("eta multiplier must be positive"));
            }
            if seen.contains(&m) {
                return Err(Error::domain(format!("repeated eta multiplier {m}")));
            }
            seen.push(m);
        }
        Ok(Self {
            factors: factors.iter().copied().filter(|f| f.1 != 0).collect(),
        })
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// `Σ m·r`, i.e. 24 times the valuation.
    pub fn order24(&self) -> i64 {
        self.factors.iter().map(|&(m, r)| m as i64 * r as i64).sum()
    }
}

impl FromStr for EtaQuotientSpec {
    type Err = Error;

    /// Accepts `"3^8"`, `"1^12 3^-12"`, `"1^12,3^-12"` or `"1^12*3^-12"`; a
    /// bare `m` means exponent 1 and the empty string is the empty product.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in s.split(|c: char| c == ',' || c == '*' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let (m, r) = tok.split_once('^').unwrap_or((tok, "1"));
            let m: u32 = m
                .parse()
                .map_err(|_| Error::parse(format!("bad eta multiplier in {tok:?}")))?;
            let r: i32 = r
                .trim_start_matches('+')
                .parse()
                .map_err(|_| Error::parse(format!("bad eta exponent in {tok:?}")))?;
            out.push((m, r));
        }
        Self::new(&out)
    }
}

impl fmt::Display for EtaQuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(m, r)| format!("{m}^{r}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Coefficients of `Π_{n≥1}(1 − qⁿ)` below `q^terms`, from the pentagonal
/// number theorem.
pub fn euler_product(terms: usize) -> Vec<i64> {
    let mut c = vec![0i64; terms];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = (kk * (3 * kk - 1) / 2) as usize;
            if e < terms {
                c[e] += if kk % 2 == 0 { 1 } else { -1 };
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    c
}

/// `σ_k(n)` for `n < len` (entry 0 is 0).
pub fn divisor_sums(k: u32, len: usize) -> Vec<i64> {
    let mut s = vec![0i64; len];
    for d in 1..len {
        let dk = (d as i64).pow(k);
        for n in (d..len).step_by(d) {
            s[n] += dk;
        }
    }
    s
}

/// Partition numbers `p(n)` for `n < terms`, the coefficients of
/// `1/Π(1 − qⁿ)`, by Euler's pentagonal recurrence.
pub fn partitions(terms: usize) -> Vec<BigInt> {
    let mut pent: Vec<(usize, bool)> = Vec::new();
    let mut k = 1i64;
    loop {
        let a = (k * (3 * k - 1) / 2) as usize;
        if a >= terms {
            break;
        }
        pent.push((a, k % 2 == 1));
        let b = (k * (3 * k + 1) / 2) as usize;
        if b < terms {
            pent.push((b, k % 2 == 1));
        }
        k += 1;
    }
    let mut p: Vec<BigInt> = Vec::with_capacity(terms);
    for n in 0..terms {
        if n == 0 {
            p.push(BigInt::from(1));
            continue;
        }
        let mut acc = BigInt::zero();
        for &(e, plus) in &pent {
            if e > n {
                break;
            }
            if plus {
                acc += &p[n - e];
            } else {
                acc -= &p[n - e];
            }
        }
        p.push(acc);
    }
    p
}

fn power(base: &[BigInt], e: u32, len: usize) -> Vec<BigInt> {
    let mut acc: Vec<BigInt> = vec![BigInt::from(1)];
    let mut sq = base[..base.len().min(len)].to_vec();
    let mut k = e;
    while k > 0 {
        if k & 1 == 1 {
            acc = kron_mul(&acc, &sq, len);
        }
        k >>= 1;
        if k > 0 {
            sq = kron_mul(&sq, &sq, len);
        }
    }
    acc.resize(len, BigInt::zero());
    acc
}

/// Power-series part `Π (q^m; q^m)^r` of an eta quotient, first `terms`
/// coefficients.
///
/// Each factor is a power of the pentagonal series (or of the partition
/// series for negative exponents), so everything is exact integer
/// multiplication.
pub fn eta_quotient_coeffs(spec: &EtaQuotientSpec, terms: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); terms];
    if terms == 0 {
        return out;
    }
    out[0] = BigInt::from(1);
    let need = |m: u32| terms.div_ceil(m as usize);
    let longest = |pos: bool| {
        spec.factors
            .iter()
            .filter(|f| (f.1 > 0) == pos)
            .map(|f| need(f.0))
            .max()
            .unwrap_or(0)
    };
    let euler: Vec<BigInt> = euler_product(longest(true))
        .into_iter()
        .map(BigInt::from)
        .collect();
    let part = partitions(longest(false));
    for &(m, r) in &spec.factors {
        let len = need(m);
        let base = if r > 0 { &euler } else { &part };
        let p = power(&base[..len], r.unsigned_abs(), len);
        let mut dilated = vec![BigInt::zero(); terms];
        for (i, c) in p.into_iter().enumerate() {
            dilated[i * m as usize] = c;
        }
        out = kron_mul(&out, &dilated, terms);
    }
    out
}

/// `Π η(m·z)^r` to `terms` integer q-steps past its valuation `Σ m·r/24`.
pub fn eta_quotient(spec: &EtaQuotientSpec, terms: usize) -> IntegerSeries {
    let o = spec.order24();
    let g = o.gcd(&24);
    let (num, den) = (o / g, 24 / g);
    IntegerSeries::from_dense(den, num, den, eta_quotient_coeffs(spec, terms))
}

/// `E₄ = 1 + 240 Σ σ₃(n) qⁿ` below `q^terms`.
pub fn eisenstein_e4(terms: usize) -> IntegerSeries {
    let s3 = divisor_sums(3, terms);
    let coeffs = (0..terms)
        .map(|n| {
            if n == 0 {
                BigInt::from(1)
            } else {
                BigInt::from(240) * s3[n]
            }
        })
        .collect();
    IntegerSeries::from_dense(1, 0, 1, coeffs)
}

/// The scalar forms the pipeline is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedForm {
    /// The weight −1/2 Kohnen plus form `q⁻¹ + 10 − 64q³ + …` on Γ₀(4).
    F,
    /// Klein's j.
    J,
    /// Hauptmodul `(η(z)/η(3z))¹²` for Γ₀(3).
    J3,
    /// `η(z)⁶η(3z)⁶`.
    Delta3,
    /// Level 9, weight −2 form `q⁻¹ + 20q² + …`.
    W,
    /// `η(3z)⁸`.
    Eta8,
}

impl NamedForm {
    pub const ALL: [NamedForm; 6] = [
        NamedForm::F,
        NamedForm::J,
        NamedForm::J3,
        NamedForm::Delta3,
        NamedForm::W,
        NamedForm::Eta8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedForm::F => "F",
            NamedForm::J => "j",
            NamedForm::J3 => "j3",
            NamedForm::Delta3 => "Delta3",
            NamedForm::W => "w",
            NamedForm::Eta8 => "eta8",
        }
    }
}

impl FromStr for NamedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedForm::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown form {s:?}")))
    }
}

impl fmt::Display for NamedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn quotient(factors: &[(u32, i32)], terms: usize) -> IntegerSeries {
    eta_quotient(&EtaQuotientSpec::new(factors).expect("valid spec"), terms)
}

fn compute(form: NamedForm, terms: usize) -> IntegerSeries {
    let t = terms;
    match form {
        NamedForm::F => {
            let a = quotient(&[(1, 10), (2, -5), (4, -6)], t);
            let b = quotient(&[(1, 2), (2, -5), (4, 2)], t).scale(&BigInt::from(20));
            &a + &b
        }
        NamedForm::J => {
            let e4 = eisenstein_e4(t);
            let e4c = &(&e4 * &e4) * &e4;
            &e4c * &quotient(&[(1, -24)], t)
        }
        NamedForm::J3 => quotient(&[(1, 12), (3, -12)], t),
        NamedForm::Delta3 => quotient(&[(1, 6), (3, 6)], t),
        NamedForm::W => {
            let a = quotient(&[(3, 2), (1, -3), (9, -3)], t);
            let b = quotient(&[(1, 3), (9, 3), (3, -10)], t).scale(&BigInt::from(3));
            let c = quotient(&[(9, 6), (3, -10)], t).scale(&BigInt::from(18));
            &(&a - &b) - &c
        }
        NamedForm::Eta8 => quotient(&[(3, 8)], t),
    }
}

fn cache() -> &'static Mutex<HashMap<NamedForm, (usize, IntegerSeries)>> {
    static CACHE: OnceLock<Mutex<HashMap<NamedForm, (usize, IntegerSeries)>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Named form to `terms` integer q-steps past its valuation. Results are
/// memoized; a longer cached expansion is truncated, which gives the same
/// series as computing afresh.
pub fn named_form(form: NamedForm, terms: usize) -> IntegerSeries {
    let terms = terms.max(1);
    let mut guard = cache().lock().unwrap_or_else(|e| e.into_inner());
    if let Some((t, s)) = guard.get(&form) {
        if *t >= terms {
            return s.with_terms(terms as i64);
        }
    }
    let s = compute(form, terms).with_terms(terms as i64);
    guard.insert(form, (terms, s.clone()));
    s
}

/// Same as [`named_form`] but never touching the cache.
pub fn named_form_uncached(form: NamedForm, terms: usize) -> IntegerSeries {
    compute(form, terms.max(1)).with_terms(terms.max(1) as i64)
}

/// Coefficients as `i64` where they fit; handy in tests.
pub fn small_coeffs(s: &IntegerSeries) -> Vec<(crate::Rational, i64)> {
    s.terms()
        .filter_map(|(e, c)| c.to_i64().map(|c| (e, c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn coeffs_at(s: &IntegerSeries, exps: &[i64]) -> Vec<i64> {
        exps.iter()
            .map(|&e| s.coeff(&rat(e, 1)).unwrap().to_i64().unwrap())
            .collect()
    }

    #[test]
    fn eta8_expansion() {
        let s = eta_quotient(&"3^8".parse().unwrap(), 20);
        assert_eq!(coeffs_at(&s, &[1, 4, 7, 10, 13, 16, 19]), [1, -8, 20, 0, -70, 64, 56]);
        assert_eq!(coeffs_at(&s, &[2, 3, 5]), [0, 0, 0]);
    }

    #[test]
    fn hauptmodul_expansion() {
        let s = named_form(NamedForm::J3, 10);
        assert_eq!(
            coeffs_at(&s, &[-1, 0, 1, 2, 3, 4, 5, 6]),
            [1, -12, 54, -76, -243, 1188, -1384, -2916]
        );
    }

    #[test]
    fn empty_product_is_one() {
        let s = eta_quotient(&"".parse().unwrap(), 5);
        assert_eq!(coeffs_at(&s, &[0, 1, 2, 3, 4]), [1, 0, 0, 0, 0]);
    }

    /// Logarithmic-derivative recurrence `N·g_N = Σ c_k g_{N−k}` with
    /// `c_k = −Σ r·m·σ₁(k/m)`; an independent route to the same coefficients.
    fn by_log_derivative(spec: &EtaQuotientSpec, terms: usize) -> Vec<BigInt> {
        let s1 = divisor_sums(1, terms);
        let mut c = vec![0i64; terms];
        for &(m, r) in spec.factors() {
            for j in 1..terms {
                if j * m as usize >= terms {
                    break;
                }
                c[j * m as usize] -= r as i64 * m as i64 * s1[j];
            }
        }
        let mut g = vec![BigInt::from(1)];
        for n in 1..terms {
            let sum: BigInt = (1..=n).map(|k| &g[n - k] * c[k]).sum();
            g.push(sum / n);
        }
        g
    }

    #[test]
    fn independent_expansions_agree() {
        let spec: EtaQuotientSpec = "1".parse().unwrap();
        let g = eta_quotient_coeffs(&spec, 300);
        let p = euler_product(300);
        assert!(g.iter().zip(&p).all(|(a, b)| a == &BigInt::from(*b)));
        for spec in ["1^10 2^-5 4^-6", "3^2 1^-3 9^-3", "1^-24", "1^6 3^6", "2^7"] {
            let spec: EtaQuotientSpec = spec.parse().unwrap();
            assert_eq!(eta_quotient_coeffs(&spec, 200), by_log_derivative(&spec, 200));
        }
        // and a power against repeated multiplication
        let e = IntegerSeries::from_dense(1, 0, 1, p.iter().map(|&c| BigInt::from(c)).collect());
        let e5 = e.pow(-5).unwrap();
        let direct = IntegerSeries::from_dense(1, 0, 1, eta_quotient_coeffs(&"1^-5".parse().unwrap(), 300));
        assert_eq!(e5, direct);
    }

    #[test]
    fn f_expansion() {
        let f = named_form(NamedForm::F, 20);
        assert_eq!(
            coeffs_at(&f, &[-1, 0, 3, 4, 7, 8, 11, 12]),
            [1, 10, -64, 108, -513, 808, -2752, 4016]
        );
        for (e, _) in f.terms() {
            let n = e.to_integer().to_i64().unwrap().rem_euclid(4);
            assert!(n == 0 || n == 3);
        }
        assert_eq!(f.coeff(&rat(2, 1)).unwrap(), BigInt::zero());
        assert!(f.coeff(&rat(1_000_000, 1)).is_err());
    }

    #[test]
    fn w_expansion() {
        let w = named_form(NamedForm::W, 20);
        assert_eq!(coeffs_at(&w, &[-1, 2, 5, 8, 11, 14]), [1, 20, 176, 1020, 4794, 19360]);
        assert_eq!(coeffs_at(&w, &[0, 1, 3]), [0, 0, 0]);
    }

    #[test]
    fn j_expansion() {
        let j = named_form(NamedForm::J, 12);
        assert_eq!(coeffs_at(&j, &[-1, 0, 1, 2]), [1, 744, 196884, 21493760]);
        let delta = quotient(&[(1, 24)], 12);
        let e4 = eisenstein_e4(12);
        assert_eq!(&j * &delta, &(&e4 * &e4) * &e4);
    }

    #[test]
    fn delta3_and_valuations() {
        let d = named_form(NamedForm::Delta3, 10);
        assert_eq!(coeffs_at(&d, &[1, 2, 3, 4, 5]), [1, -6, 9, 4, 6]);
        for spec in ["1^10 2^-5 4^-6", "1^8", "3^2 1^-3 9^-3", "5^1"] {
            let spec: EtaQuotientSpec = spec.parse().unwrap();
            let s = eta_quotient(&spec, 6);
            assert_eq!(s.valuation().unwrap(), rat(spec.order24(), 24));
        }
    }

    #[test]
    fn memo_is_pure() {
        let long = named_form(NamedForm::W, 40);
        let short = named_form(NamedForm::W, 15);
        let fresh = named_form_uncached(NamedForm::W, 15);
        assert_eq!(short.dump(), fresh.dump());
        assert_eq!(long.with_terms(15).dump(), fresh.dump());
    }

    #[test]
    fn spec_parsing() {
        let s: EtaQuotientSpec = "1^12,3^-12".parse().unwrap();
        assert_eq!(s.factors(), &[(1, 12), (3, -12)]);
        assert_eq!(s.to_string(), "1^12 3^-12");
        assert!("3^x".parse::<EtaQuotientSpec>().is_err());
        assert!("2^1 2^3".parse::<EtaQuotientSpec>().is_err());
        assert!("zeta".parse::<NamedForm>().is_err());
    }
}

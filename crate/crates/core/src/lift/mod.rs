//! Fourier expansion of the theta lift of `f_m ⊗ F`, its identification as
//! `½Δ₃·A(j₃)/B(j₃)`, and the resulting mock modular coefficients.

mod heegner;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{rat, Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::eta::{named_form, NamedForm};
use crate::numerics::{eval_j3, recognize_algebraic, CMPoint};
use crate::vector::{basis_tensor_below, VectorValuedSeries};
use crate::{IntegerSeries, RationalSeries};

pub use heegner::{
    denominator_factors, denominator_product, gamma0_3_reduce, heegner_points, minimal_poly_j3, norm_product,
    reduced_forms, DenominatorFactor, HeegnerClass,
};

/// `j₃(z_U)`, checked numerically by [`check_zu_value`].
pub const J3_AT_ZU: i64 = -27;

/// Knobs of the lift pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftParams {
    /// `e` in `Σ_{d|n} (n/d)^e c(d²/12, d)`.
    pub divisor_exponent: u32,
    /// Working precision for CM values.
    pub float_bits: usize,
    /// Coefficients beyond `deg B` that must vanish in the identification.
    pub margin: usize,
}

impl Default for LiftParams {
    fn default() -> Self {
        Self {
            divisor_exponent: 2,
            float_bits: 256,
            margin: 10,
        }
    }
}

/// A pole of the lift at the CM points of discriminant `disc` on the
/// components `±r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoleDatum {
    pub disc: i64,
    pub r: i64,
    pub order: u32,
}

impl PoleDatum {
    pub fn new(disc: i64, r: i64, order: u32) -> Result<Self> {
        let r = r.rem_euclid(6);
        let r = r.min(6 - r);
        if disc >= 0 || (disc - r * r).rem_euclid(12) != 0 || order == 0 {
            return Err(Error::domain(format!("bad pole datum D = {disc}, r = ±{r}")));
        }
        Ok(Self { disc, r, order })
    }
}

impl fmt::Display for PoleDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, ±{}, {})", self.disc, self.r, self.order)
    }
}

/// `L(n) = Σ_{d|n} (n/d)^e c(d)` for `n = 1..=n_max`, asking `c` once per `d`.
pub fn lift_coefficients(
    n_max: usize,
    exponent: u32,
    c: impl Fn(i64) -> Result<Rational>,
) -> Result<Vec<Rational>> {
    let cs = (1..=n_max as i64).map(&c).collect::<Result<Vec<_>>>()?;
    let mut out = vec![Rational::zero(); n_max];
    for (i, cd) in cs.iter().enumerate() {
        if cd.is_zero() {
            continue;
        }
        let d = i + 1;
        for k in 1..=n_max / d {
            let w = Rational::from_integer(BigInt::from(k).pow(exponent));
            out[k * d - 1] += &w * cd;
        }
    }
    Ok(out)
}

/// Lift expansion `Σ_{n<terms} L(n) qⁿ` of a form on ℤ/6.
pub fn lift_expansion(f: &VectorValuedSeries<Rational>, terms: usize, exponent: u32) -> Result<RationalSeries> {
    if f.n() != 6 {
        return Err(Error::domain(format!("lift needs a form on ℤ/6, got ℤ/{}", f.n())));
    }
    let n_max = terms.saturating_sub(1);
    let l = lift_coefficients(n_max, exponent, |d| f.component(d.rem_euclid(6)).coeff(&rat(d * d, 12)))?;
    Ok(RationalSeries::new(
        1,
        l.into_iter().enumerate().map(|(i, c)| (i as i64 + 1, c)),
        Some(terms as i64),
    ))
}

/// Pole data read off the principal part: `c·q^{−|D|/12}` on component `r`.
pub fn pole_data(f: &VectorValuedSeries<Rational>) -> Vec<PoleDatum> {
    let mut out: Vec<PoleDatum> = f
        .principal_part()
        .into_iter()
        .filter(|(_, _, c)| !c.is_zero())
        .filter_map(|(mu, e, _)| {
            let d = e * rat(12, 1);
            if !d.is_integer() {
                return None;
            }
            PoleDatum::new(d.to_integer().to_i64()?, mu as i64, 3).ok()
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `liftSeries = ½Δ₃·A(j₃)/B(j₃)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Identification {
    pub a: Polynomial<Rational>,
    pub b: Polynomial<Rational>,
    pub factors: Vec<DenominatorFactor>,
    /// `A/B` in lowest terms.
    pub function: RationalFunction,
    /// Residuals were checked below this exponent.
    pub checked_below: i64,
}

/// Powers `j₃⁰ … j₃^k`, each with `terms` steps past its valuation.
fn j3_powers(k: usize, terms: usize) -> Vec<IntegerSeries> {
    let j = named_form(NamedForm::J3, terms);
    let mut out = vec![IntegerSeries::one().with_terms(terms as i64)];
    for i in 0..k {
        let next = &out[i] * &j;
        out.push(next);
    }
    out
}

fn half_delta3(terms: usize) -> RationalSeries {
    RationalSeries::from_integer_series(&named_form(NamedForm::Delta3, terms)).scale(&rat(1, 2))
}

/// Finds `A` with `lift = ½Δ₃·A(j₃)/B(j₃)` by a triangular solve in
/// descending powers of `j₃ = q⁻¹ − 12 + O(q)`.
pub fn identify_rational(lift: &RationalSeries, factors: Vec<DenominatorFactor>) -> Result<Identification> {
    let b = denominator_product(&factors);
    let deg_b = b.degree().unwrap_or(0);
    let lt = lift
        .raw_trunc()
        .ok_or_else(|| Error::domain("identification needs a truncated lift"))?;
    if lift.den() != 1 || lt <= deg_b as i64 + 2 {
        return Err(Error::precision(format!(
            "lift known below q^{lt} cannot pin down a numerator of degree {deg_b}"
        )));
    }
    let g = lift.div(&half_delta3(lt as usize + 2))?;
    let gt = g.raw_trunc().expect("truncated");
    let pows = j3_powers(deg_b, gt as usize);
    let mut bj = IntegerSeries::zero();
    for (k, c) in b.coeffs().iter().enumerate() {
        if !c.is_zero() {
            bj = &bj + &pows[k].scale(&c.to_integer());
        }
    }
    let mut h = &g * &RationalSeries::from_integer_series(&bj);
    let mut a = vec![Rational::zero(); deg_b + 1];
    for k in (0..=deg_b).rev() {
        let c = h.coeff(&rat(-(k as i64), 1))?;
        if !c.is_zero() {
            h = &h - &RationalSeries::from_integer_series(&pows[k]).scale(&c);
            a[k] = c;
        }
    }
    if let Some((e, c)) = h.terms().find(|(_, c)| !c.is_zero()) {
        return Err(Error::Identification {
            exponent: e.to_string(),
            residual: c.to_string(),
        });
    }
    let checked_below = h.raw_trunc().expect("truncated");
    let a = Polynomial::new(a);
    let function = RationalFunction::from_factored(
        a.clone(),
        &factors.iter().map(|f| (f.poly.clone(), f.order)).collect::<Vec<_>>(),
    )?;
    Ok(Identification {
        a,
        b,
        factors,
        function,
        checked_below,
    })
}

/// `½Δ₃·A(j₃)/B(j₃)` re-expanded below `q^terms`.
pub fn reexpand(id: &Identification, terms: usize) -> Result<RationalSeries> {
    let deg = id.a.degree().unwrap_or(0).max(id.b.degree().unwrap_or(0));
    let pows = j3_powers(deg, terms + deg + 2);
    let eval = |p: &Polynomial<Rational>| {
        p.coeffs().iter().enumerate().fold(RationalSeries::zero(), |acc, (k, c)| {
            &acc + &RationalSeries::from_integer_series(&pows[k]).scale(c)
        })
    };
    let q = eval(&id.a).div(&eval(&id.b))?;
    Ok((&half_delta3(terms + deg + 2) * &q).truncate(&rat(terms as i64, 1)))
}

/// Everything the pipeline produces for one basis index `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftReport {
    pub m: Rational,
    pub poles: Vec<PoleDatum>,
    pub lift: RationalSeries,
    pub identification: Identification,
    /// `A(−27)/B(−27)`.
    pub value: Rational,
}

/// Basis → tensor → lift → identify → evaluate at `X = −27` for one `m`.
pub fn run_lift(m: &Rational, params: &LiftParams) -> Result<LiftReport> {
    let poles = pole_data(&basis_tensor_below(m, &rat(0, 1))?);
    let factors = factors_with_retry(&poles, params.float_bits)?;
    let deg_b = denominator_product(&factors).degree().unwrap_or(0);
    let n = deg_b + params.margin + 1;
    let x = rat((n * n) as i64, 12) + rat(1, 1);
    let tensor = basis_tensor_below(m, &x)?;
    let lift = lift_expansion(&tensor, n + 1, params.divisor_exponent)?;
    let identification = identify_rational(&lift, factors)?;
    let value = identification.function.eval(&rat(J3_AT_ZU, 1))?;
    Ok(LiftReport {
        m: m.clone(),
        poles,
        lift,
        identification,
        value,
    })
}

/// Rounds the class polynomials, doubling the precision up to twice when
/// the rounding is not clean.
fn factors_with_retry(poles: &[PoleDatum], bits: usize) -> Result<Vec<DenominatorFactor>> {
    let mut bits = bits;
    let mut tries = 0;
    loop {
        match denominator_factors(poles, bits) {
            Err(Error::Precision(_)) if tries < 2 => {
                bits *= 2;
                tries += 1;
            }
            r => return r,
        }
    }
}

/// `r_m` for `m ∈ {−1/3, 2/3, 5/3, …} ∩ [−1/3, m_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MockCoefficientTable {
    pub entries: BTreeMap<Rational, Rational>,
}

impl MockCoefficientTable {
    pub fn get(&self, m: &Rational) -> Option<&Rational> {
        self.entries.get(m)
    }

    pub fn max_m(&self) -> Rational {
        self.entries.keys().next_back().cloned().unwrap_or_else(|| rat(-1, 3))
    }
}

/// Indices `2/3, 5/3, …` up to `m_max`.
pub fn basis_indices(m_max: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let mut m = rat(2, 3);
    while &m <= m_max {
        out.push(m.clone());
        m += Rational::one();
    }
    out
}

/// Runs every `m` (in parallel) and normalises by the `m = −1/3` lift.
pub fn mock_coefficients(m_max: &Rational, params: &LiftParams) -> Result<(MockCoefficientTable, Vec<LiftReport>)> {
    if m_max < &rat(2, 3) {
        return Err(Error::domain("mock coefficients need m_max ≥ 2/3"));
    }
    let mut ms = vec![rat(-1, 3)];
    ms.extend(basis_indices(m_max));
    let reports = ms
        .par_iter()
        .map(|m| run_lift(m, params))
        .collect::<Result<Vec<_>>>()?;
    let norm = reports[0].value.clone();
    if norm != Rational::one() {
        return Err(Error::Identification {
            exponent: "0".into(),
            residual: format!("lift of f_-1/3 is {norm}·½Δ₃, not ½Δ₃"),
        });
    }
    let entries = reports.iter().map(|r| (r.m.clone(), &r.value / &norm)).collect();
    Ok((MockCoefficientTable { entries }, reports))
}

/// `¼(q⁻¹ + Σ r_m q^{3m})`; exponents outside `−1 + 3ℤ` vanish.
pub fn scalar_preimage(table: &MockCoefficientTable) -> RationalSeries {
    let quarter = rat(1, 4);
    let terms = table
        .entries
        .iter()
        .map(|(m, r)| ((m * rat(3, 1)).to_integer().to_i64().expect("small"), r * &quarter));
    let top = (table.max_m() * rat(3, 1)).to_integer().to_i64().expect("small");
    RationalSeries::new(1, terms, Some(top + 3))
}

/// Coefficients of the reference ξ-preimage at `q⁻¹, q², q⁵, …, q¹⁴`.
pub const REFERENCE_PREIMAGE: [(i64, i64, i64); 6] = [
    (-1, 1, 1),
    (2, -1, 4),
    (5, 49, 125),
    (8, -48, 512),
    (11, -771, 1331),
    (14, 2744, 2744),
];

/// One line of the comparison `ours + ¾w` against the reference preimage.
#[derive(Clone, Debug, PartialEq)]
pub struct PreimageCheck {
    pub exponent: i64,
    pub ours: Rational,
    pub w: Rational,
    pub combined: Rational,
    pub expected: Rational,
}

impl PreimageCheck {
    pub fn pass(&self) -> bool {
        self.combined == self.expected
    }
}

/// Compares wherever the table reaches.
pub fn compare_with_reference(preimage: &RationalSeries) -> Result<Vec<PreimageCheck>> {
    let w = RationalSeries::from_integer_series(&named_form(NamedForm::W, 20));
    let top = preimage.trunc().unwrap_or_else(|| rat(i64::MAX, 1));
    let three_quarters = rat(3, 4);
    let mut out = Vec::new();
    for (e, n, d) in REFERENCE_PREIMAGE {
        let x = rat(e, 1);
        if x >= top {
            break;
        }
        let ours = preimage.coeff(&x)?;
        let wc = w.coeff(&x)?;
        let combined = &ours + &(&three_quarters * &wc);
        out.push(PreimageCheck {
            exponent: e,
            ours,
            w: wc,
            combined,
            expected: rat(n, d),
        });
    }
    Ok(out)
}

/// Confirms numerically that `j₃(z_U) = −27` before it is used.
pub fn check_zu_value(prec: usize) -> Result<()> {
    let v = eval_j3(&CMPoint::z_u().tau(prec), prec)?;
    let r = recognize_algebraic(&v, 2, &BigInt::from(1_000_000))?;
    let want = Polynomial::from_i64s(&[-J3_AT_ZU, 1]);
    if r.poly != want || !r.poly.coeff(1).is_positive() {
        return Err(Error::Recognition(format!("j₃(z_U) recognised as root of {}", r.poly.pretty())));
    }
    Ok(())
}

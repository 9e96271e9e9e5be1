//! Binary theta series with harmonic polynomial `λ^{k−1}` over lattices in
//! imaginary quadratic fields, and the unary theta functions.

use std::collections::BTreeMap;

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{rat, Coefficient, QuadElem, Rational};
use crate::error::{Error, Result};
use crate::eta::eta_quotient;
use crate::series::PuiseuxSeries;
use crate::vector::{Parity, VectorValuedSeries};
use crate::{QuadSeries, RationalSeries};

/// A rank-two lattice `ℤe₁ + ℤe₂` inside ℚ(√−D) with quadratic form
/// `scale·Nm`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryLatticeSpec {
    disc: i64,
    basis: [QuadElem; 2],
    scale: Rational,
}

impl BinaryLatticeSpec {
    pub fn new(disc: i64, basis: [QuadElem; 2], scale: Rational) -> Result<Self> {
        if disc <= 0 {
            return Err(Error::domain("field parameter D must be positive"));
        }
        if !scale.is_positive() {
            return Err(Error::domain("form scale must be positive"));
        }
        for e in &basis {
            if !e.is_rational() && e.d() != -disc {
                return Err(Error::domain(format!("basis vector {e} is not in ℚ(√−{disc})")));
            }
        }
        let s = Self { disc, basis, scale };
        let (a, b, c) = s.form();
        if &a * &c * rat(4, 1) - &b * &b <= Rational::zero() {
            return Err(Error::domain("basis vectors are linearly dependent"));
        }
        Ok(s)
    }

    /// `(𝒪, Nm)` for ℚ(√−3), basis `1, ζ` with `ζ = (1 + √−3)/2`.
    pub fn eisenstein() -> Self {
        Self::new(3, [QuadElem::rational(rat(1, 1)), QuadElem::zeta6()], rat(1, 1))
            .expect("valid lattice")
    }

    /// `(√−3·𝒪, Nm)`, basis `√−3, √−3·ζ`.
    pub fn different() -> Self {
        let s = QuadElem::sqrt(-3).expect("square-free");
        let sz = s.clone() * QuadElem::zeta6();
        Self::new(3, [s, sz], rat(1, 1)).expect("valid lattice")
    }

    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `Q(a·e₁ + b·e₂) = A a² + B ab + C b²`.
    pub fn form(&self) -> (Rational, Rational, Rational) {
        let [e1, e2] = &self.basis;
        let a = e1.norm() * &self.scale;
        let c = e2.norm() * &self.scale;
        let b = (e1.clone() * e2.conj()).trace() * &self.scale;
        (a, b, c)
    }

    /// Rational lower bound `det/trace` for the smallest Gram eigenvalue.
    pub fn lambda_min_bound(&self) -> Rational {
        let (a, b, c) = self.form();
        (&a * &c - &b * &b / rat(4, 1)) / (&a + &c)
    }

    /// Coordinate box radius that contains every vector with `Q < terms`.
    pub fn box_radius(&self, terms: i64) -> i64 {
        let r = Rational::from_integer(terms.into()) / self.lambda_min_bound();
        let mut s = r.floor().to_integer().sqrt().to_i64().unwrap_or(i64::MAX / 4);
        while Rational::from_integer((s * s).into()) < r {
            s += 1;
        }
        s + 1
    }
}

/// `Σ_{λ ∈ L + s} λ^{k−1} q^{Q(λ)}` below `q^terms`, where `s = s₁e₁ + s₂e₂`.
pub fn binary_theta(spec: &BinaryLatticeSpec, shift: &[Rational; 2], k: u32, terms: i64) -> Result<QuadSeries> {
    binary_theta_in_box(spec, shift, k, terms, spec.box_radius(terms))
}

/// Same sum enumerated over coordinates `|x + sᵢ| ≤ radius`.
pub fn binary_theta_in_box(
    spec: &BinaryLatticeSpec,
    shift: &[Rational; 2],
    k: u32,
    terms: i64,
    radius: i64,
) -> Result<QuadSeries> {
    if k < 2 {
        return Err(Error::domain("binary theta needs weight k ≥ 2"));
    }
    let (qa, qb, qc) = spec.form();
    let bound = Rational::from_integer(terms.into());
    let range = |s: &Rational| {
        let lo = (-Rational::from_integer(radius.into()) - s).ceil().to_integer();
        let hi = (Rational::from_integer(radius.into()) - s).floor().to_integer();
        (lo.to_i64().unwrap(), hi.to_i64().unwrap())
    };
    let (x0, x1) = range(&shift[0]);
    let (y0, y1) = range(&shift[1]);
    let mut acc: BTreeMap<Rational, QuadElem> = BTreeMap::new();
    for x in x0..=x1 {
        let a = Rational::from_integer(x.into()) + &shift[0];
        for y in y0..=y1 {
            let b = Rational::from_integer(y.into()) + &shift[1];
            let q = &qa * &a * &a + &qb * &a * &b + &qc * &b * &b;
            if q >= bound {
                continue;
            }
            let lam = spec.basis[0].scale(&a) + spec.basis[1].scale(&b);
            let v = lam.pow(k - 1);
            acc.entry(q).or_insert_with(QuadElem::zero).add_assign_ref(&v);
        }
    }
    let den = acc
        .keys()
        .fold(1i64, |l, e| l.lcm(&e.denom().to_i64().expect("small denominator")));
    let terms_iter = acc.into_iter().map(|(e, c)| {
        let n = (e * Rational::from_integer(den.into())).to_integer().to_i64().unwrap();
        (n, c)
    });
    Ok(PuiseuxSeries::new(den, terms_iter, Some(terms * den)))
}

/// Coset `μ/3·(1 + ζ) + 𝒪` of the dual of `(𝒪, Nm)`.
pub fn eisenstein_coset_shift(mu: i64) -> [Rational; 2] {
    let s = rat(mu.rem_euclid(3), 3);
    [s.clone(), s]
}

/// Vector theta `Θ_{P,k} = Σ_μ θ_{P+μ} φ_μ` for `P = (𝒪, Nm)` on ℤ/3.
pub fn theta_p(k: u32, terms: i64) -> Result<VectorValuedSeries<QuadElem>> {
    let spec = BinaryLatticeSpec::eisenstein();
    let comps = (0..3)
        .map(|mu| binary_theta(&spec, &eisenstein_coset_shift(mu), k, terms))
        .collect::<Result<Vec<_>>>()?;
    let parity = if (k - 1) % 2 == 1 { Parity::Odd } else { Parity::Even };
    VectorValuedSeries::new(comps, parity, Rational::from_integer(k.into()))
}

/// `(√−3/3)·η(τ)⁸·(φ₁ − φ₂)`, the closed form of `Θ_{P,4}`.
pub fn theta_p4_closed_form(terms: i64) -> VectorValuedSeries<QuadElem> {
    let c = QuadElem::sqrt(-3).expect("square-free").scale(&rat(1, 3));
    let e8 = eta_quotient(&"1^8".parse().expect("valid"), terms.max(1) as usize)
        .map(QuadElem::from_integer)
        .truncate(&rat(terms, 1));
    let g = e8.scale(&c);
    VectorValuedSeries::new(
        vec![PuiseuxSeries::big_o(&rat(terms, 1)), g.clone(), -g],
        Parity::Odd,
        rat(4, 1),
    )
    .expect("antisymmetric by construction")
}

/// `(θ_{P+1} − θ_{P−1})/6` for `P = (√−3·𝒪, Nm)` and `k = 4`, below `q^terms`.
pub fn hecke_theta_eta8(terms: i64) -> Result<QuadSeries> {
    let spec = BinaryLatticeSpec::different();
    // 1 = √−3·(1/3 − 2/3·ζ)
    let plus = binary_theta(&spec, &[rat(1, 3), rat(-2, 3)], 4, terms)?;
    let minus = binary_theta(&spec, &[rat(-1, 3), rat(2, 3)], 4, terms)?;
    Ok((&plus - &minus).scale(&QuadElem::rational(rat(1, 6))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryVariant {
    /// `(ℤ, x²)`: components `Σ_{n ≡ r (2)} q^{n²/4}`.
    Z1,
    /// `(ℤ, 6x²)`: components `Σ_{n ≡ r (12)} q^{n²/24}`.
    Z6,
}

/// Unary theta function below `q^terms`.
pub fn unary_theta(variant: UnaryVariant, terms: i64) -> VectorValuedSeries<Rational> {
    let (n, den) = match variant {
        UnaryVariant::Z1 => (2i64, 4i64),
        UnaryVariant::Z6 => (12, 24),
    };
    let limit = terms * den;
    let mut comps: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); n as usize];
    let mut x = 0i64;
    while x * x < limit {
        for v in if x == 0 { vec![0] } else { vec![x, -x] } {
            comps[v.rem_euclid(n) as usize].push((x * x, rat(1, 1)));
        }
        x += 1;
    }
    let comps = comps
        .into_iter()
        .map(|t| RationalSeries::new(den, t, Some(limit)))
        .collect();
    let weight = rat(1, 2);
    VectorValuedSeries::new(comps, Parity::Even, weight).expect("n ↦ −n symmetric")
}

/// Constant vector `φ₁ − φ₅ − φ₇ + φ₁₁` on ℤ/12.
pub fn phi_eta() -> VectorValuedSeries<Rational> {
    let comps = (0..12)
        .map(|mu| {
            let c = match mu {
                1 | 11 => 1,
                5 | 7 => -1,
                _ => 0,
            };
            RationalSeries::new(1, [(0, rat(c, 1))], None)
        })
        .collect();
    VectorValuedSeries::new(comps, Parity::Even, rat(0, 1)).expect("symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::{kohnen_split, pairing};

    fn q(s: &str) -> QuadElem {
        s.parse().unwrap()
    }

    #[test]
    fn first_theta_coefficient() {
        let spec = BinaryLatticeSpec::eisenstein();
        let t = binary_theta(&spec, &eisenstein_coset_shift(1), 4, 3).unwrap();
        assert_eq!(t.coeff(&rat(1, 3)).unwrap(), q("0+1/3*sqrt(-3)"));
        let t0 = binary_theta(&spec, &eisenstein_coset_shift(0), 4, 10).unwrap();
        assert!(t0.is_zero());
    }

    #[test]
    fn theta_eta8_identity() {
        let th = theta_p(4, 20).unwrap();
        assert_eq!(th, theta_p4_closed_form(20));
        assert_eq!(th.trunc(), Some(rat(20, 1)));
        let c1 = th.component(1);
        let c2 = th.component(2);
        assert_eq!(c2, &-c1);
    }

    #[test]
    fn hecke_identity() {
        let h = hecke_theta_eta8(30).unwrap();
        let e = eta_quotient(&"3^8".parse().unwrap(), 30).map(QuadElem::from_integer);
        assert_eq!(h, e.truncate(&rat(30, 1)));
        assert_eq!(h.coeff(&rat(1, 1)).unwrap(), q("1"));
        assert_eq!(h.coeff(&rat(2, 1)).unwrap(), q("0"));
    }

    #[test]
    fn doubling_the_box_changes_nothing() {
        for spec in [BinaryLatticeSpec::eisenstein(), BinaryLatticeSpec::different()] {
            for shift in [[rat(0, 1), rat(0, 1)], [rat(1, 3), rat(1, 3)], [rat(1, 3), rat(-2, 3)]] {
                let r = spec.box_radius(15);
                let a = binary_theta_in_box(&spec, &shift, 4, 15, r).unwrap();
                let b = binary_theta_in_box(&spec, &shift, 4, 15, 2 * r).unwrap();
                assert_eq!(a.dump(), b.dump());
            }
        }
    }

    #[test]
    fn unary_components() {
        let t = unary_theta(UnaryVariant::Z1, 10);
        let c0: Vec<_> = t.component(0).terms().map(|(e, c)| (e, c.clone())).take(3).collect();
        assert_eq!(c0, vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(2, 1)), (rat(4, 1), rat(2, 1))]);
        let c1: Vec<_> = t.component(1).terms().map(|(e, c)| (e, c.clone())).take(2).collect();
        assert_eq!(c1, vec![(rat(1, 4), rat(2, 1)), (rat(9, 4), rat(2, 1))]);
        for s in t.components() {
            for (e, c) in s.terms() {
                assert!(e.is_zero() || c == &rat(2, 1));
            }
        }
    }

    #[test]
    fn pairing_with_f_is_twelve() {
        let k = kohnen_split(4 * 40 + 2);
        let p = pairing(&k, &unary_theta(UnaryVariant::Z1, 41)).unwrap();
        assert!(p.trunc().unwrap() >= rat(40, 1));
        let (same, _) = p.compare(&RationalSeries::new(1, [(0, rat(12, 1))], None));
        assert!(same);
    }

    #[test]
    fn z6_pairing_gives_two_eta() {
        let p = pairing(&unary_theta(UnaryVariant::Z6, 30), &phi_eta()).unwrap();
        let eta = RationalSeries::from_integer_series(&eta_quotient(&"1".parse().unwrap(), 30))
            .scale(&rat(2, 1));
        assert!(p.compare(&eta).0);
        assert!(p.trunc().unwrap() >= rat(29, 1));
    }

    #[test]
    fn coset_antisymmetry() {
        let spec = BinaryLatticeSpec::eisenstein();
        let a = binary_theta(&spec, &eisenstein_coset_shift(1), 4, 12).unwrap();
        let b = binary_theta(&spec, &eisenstein_coset_shift(2), 4, 12).unwrap();
        assert_eq!(a, -&b);
        for (_, c) in a.terms() {
            assert!(c.is_rational() || c.d() == -3);
        }
    }
}

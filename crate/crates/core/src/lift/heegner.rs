//! Γ₀(3) Heegner forms, their CM values of j₃ and the class polynomials.

use std::collections::BTreeMap;

use num_traits::One;

use super::PoleDatum;
use crate::arith::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::numerics::{eval_j3, minimal_poly_from_values, BigComplex, BigReal, CMPoint};

/// Relative tolerance under which two j₃ values count as the same point.
const FINGERPRINT_TOL: f64 = 1e-20;

/// Forms `[a, b, c]` of discriminant `D` with `3 | a` and `b ≡ r mod 6`,
/// one per Γ₀(3)-class, and their CM points.
#[derive(Clone, Debug, PartialEq)]
pub struct HeegnerClass {
    pub disc: i64,
    pub r: i64,
    pub forms: Vec<CMPoint>,
}

/// SL₂(ℤ)-reduced positive definite forms of discriminant `d`, primitive or not.
pub fn reduced_forms(d: i64) -> Vec<[i64; 3]> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in (-a + 1)..=a {
            if (b * b - d) % (4 * a) == 0 {
                let c = (b * b - d) / (4 * a);
                if c < a || (c == a && b < 0) {
                    continue;
                }
                out.push([a, b, c]);
            }
        }
        a += 1;
    }
    out
}

/// `Q ∘ g` for `g = (p q; r s)`.
fn act(f: [i64; 3], g: [i64; 4]) -> [i64; 3] {
    let [a, b, c] = f;
    let [p, q, r, s] = g;
    [
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    ]
}

/// Descends with `T^k` and `(1 0; 3k 1)` until `|b| ≤ a` and `|b| ≤ 3c`.
/// Both moves lie in Γ₀(3), so `a mod 3`, `b mod 6` and j₃ are unchanged.
pub fn gamma0_3_reduce(f: [i64; 3]) -> [i64; 3] {
    let mut f = f;
    for _ in 0..10_000 {
        let [a, b, _] = f;
        let k = (a - b).div_euclid(2 * a);
        let g = act(f, [1, k, 0, 1]);
        let [_, b2, c2] = g;
        let l = (3 * c2 - b2).div_euclid(6 * c2);
        let h = act(g, [1, 0, 3 * l, 1]);
        if h == f {
            break;
        }
        f = h;
    }
    f
}

fn same_point(x: &BigComplex, y: &BigComplex) -> bool {
    let d = (x - y).abs().to_f64();
    let s = x.abs().to_f64().max(1.0);
    d <= FINGERPRINT_TOL * s
}

/// Keeps the first point of every j₃ value.
fn dedupe(points: Vec<CMPoint>, prec: usize) -> Result<Vec<(CMPoint, BigComplex)>> {
    let mut kept: Vec<(CMPoint, BigComplex)> = Vec::new();
    for p in points {
        let v = eval_j3(&p.tau(prec), prec)?;
        if !kept.iter().any(|(_, w)| same_point(&v, w)) {
            kept.push((p, v));
        }
    }
    Ok(kept)
}

fn candidates(d: i64, r: i64) -> Vec<CMPoint> {
    const COSETS: [[i64; 4]; 4] = [[1, 0, 0, 1], [0, -1, 1, 0], [1, -1, 1, 0], [2, -1, 1, 0]];
    let mut out = Vec::new();
    for f in reduced_forms(d) {
        for g in COSETS {
            let mut h = act(f, g);
            if h[0] < 0 {
                h = h.map(|x| -x);
            }
            if h[0] % 3 == 0 && (h[1] - r).rem_euclid(6) == 0 {
                let [a, b, c] = gamma0_3_reduce(h);
                out.push(CMPoint::new(a, b, c).expect("positive definite"));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn check_residue(d: i64, r: i64) -> Result<()> {
    if d >= 0 || (d - r * r).rem_euclid(12) != 0 {
        return Err(Error::domain(format!("no Heegner forms with D = {d}, r = {r} (need D < 0, D ≡ r² mod 12)")));
    }
    Ok(())
}

/// Γ₀(3)-class representatives of discriminant `d` and residue `r`.
pub fn heegner_points(d: i64, r: i64, prec: usize) -> Result<HeegnerClass> {
    check_residue(d, r)?;
    let forms = dedupe(candidates(d, r), prec)?.into_iter().map(|(p, _)| p).collect();
    Ok(HeegnerClass { disc: d, r, forms })
}

/// `Π (X − j₃(τ))` over the classes for `r` and `−r`, rounded to integers.
pub fn minimal_poly_j3(d: i64, r: i64, prec: usize) -> Result<Polynomial<Rational>> {
    check_residue(d, r)?;
    let mut pts = candidates(d, r);
    pts.extend(candidates(d, -r));
    let vals: Vec<BigComplex> = dedupe(pts, prec)?.into_iter().map(|(_, v)| v).collect();
    Ok(minimal_poly_from_values(&vals)?.0)
}

/// One factor `S^order` of the denominator, collecting the distinct CM
/// points of one primitive discriminant.
#[derive(Clone, Debug, PartialEq)]
pub struct DenominatorFactor {
    pub disc: i64,
    pub points: Vec<CMPoint>,
    pub poly: Polynomial<Rational>,
    pub order: u32,
}

/// Every CM point named by the pole data (both signs of `r`), reduced to
/// primitive forms and counted once, grouped by discriminant and rounded.
pub fn denominator_factors(poles: &[PoleDatum], prec: usize) -> Result<Vec<DenominatorFactor>> {
    let mut pts: BTreeMap<CMPoint, u32> = BTreeMap::new();
    for p in poles {
        for r in [p.r, -p.r] {
            for c in candidates(p.disc, r) {
                let [a, b, cc] = c.primitive().form();
                let q = gamma0_3_reduce([a, b, cc]);
                let q = CMPoint::new(q[0], q[1], q[2]).expect("positive definite");
                let o = pts.entry(q).or_insert(0);
                *o = (*o).max(p.order);
            }
        }
    }
    let mut groups: BTreeMap<(i64, u32), Vec<CMPoint>> = BTreeMap::new();
    for (p, o) in pts {
        groups.entry((p.disc(), o)).or_default().push(p);
    }
    let mut out = Vec::new();
    for ((disc, order), g) in groups.into_iter().rev() {
        let kept = dedupe(g, prec)?;
        let vals: Vec<BigComplex> = kept.iter().map(|(_, v)| v.clone()).collect();
        let (poly, _) = minimal_poly_from_values(&vals)?;
        out.push(DenominatorFactor {
            disc,
            points: kept.into_iter().map(|(p, _)| p).collect(),
            poly,
            order,
        });
    }
    Ok(out)
}

/// `Π Sᵢ^orderᵢ`.
pub fn denominator_product(factors: &[DenominatorFactor]) -> Polynomial<Rational> {
    factors
        .iter()
        .fold(Polynomial::constant(Rational::one()), |acc, f| &acc * &f.poly.pow(f.order))
}

/// Value of `|j₃|²` multiplied over the points, for the constant-term check.
pub fn norm_product(points: &[CMPoint], prec: usize) -> Result<BigReal> {
    let mut acc = BigReal::from_i64(1, prec);
    for p in points {
        acc = &acc * &eval_j3(&p.tau(prec), prec)?.norm_sqr();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forms(c: &HeegnerClass) -> Vec<[i64; 3]> {
        c.forms.iter().map(|p| p.form()).collect()
    }

    #[test]
    fn heegner_classes_small() {
        assert_eq!(forms(&heegner_points(-11, 1, 256).unwrap()), vec![[3, 1, 1]]);
        assert_eq!(forms(&heegner_points(-11, -1, 256).unwrap()), vec![[3, -1, 1]]);
        assert_eq!(forms(&heegner_points(-8, 2, 256).unwrap()), vec![[3, 2, 1]]);
        assert_eq!(forms(&heegner_points(-8, -2, 256).unwrap()), vec![[3, -2, 1]]);
    }

    #[test]
    fn class_number_three() {
        let c = heegner_points(-23, 1, 256).unwrap();
        assert_eq!(c.forms.len(), 3);
        // exhaustive oracle: reduced primitive forms of discriminant −23
        assert_eq!(reduced_forms(-23).len(), 3);
        for p in &c.forms {
            let [a, b, _] = p.form();
            assert!(a % 3 == 0 && (b - 1).rem_euclid(6) == 0 && p.disc() == -23);
        }
    }

    #[test]
    fn bad_residue_is_a_domain_error() {
        assert!(matches!(heegner_points(-11, 2, 128), Err(Error::Domain(_))));
        assert!(heegner_points(11, 1, 128).is_err());
    }

    #[test]
    fn reduction_reaches_small_forms() {
        assert_eq!(gamma0_3_reduce([9, -5, 1]), [3, 1, 1]);
        assert_eq!(gamma0_3_reduce([3, 7, 5]), [3, 1, 1]);
    }

    #[test]
    fn class_polynomials() {
        assert_eq!(minimal_poly_j3(-11, 1, 256).unwrap(), Polynomial::from_i64s(&[729, -10, 1]));
        assert_eq!(minimal_poly_j3(-8, 2, 256).unwrap(), Polynomial::from_i64s(&[729, 46, 1]));
        assert_eq!(minimal_poly_j3(-3, 3, 256).unwrap(), Polynomial::from_i64s(&[27, 1]));
        let p = minimal_poly_j3(-23, 1, 256).unwrap();
        assert_eq!(p.degree(), Some(6));
        assert!(p.is_monic() && p.is_integral());
        let mut pts = heegner_points(-23, 1, 256).unwrap().forms;
        pts.extend(heegner_points(-23, -1, 256).unwrap().forms);
        let n = norm_product(&pts, 256).unwrap();
        // product over conjugate pairs: constant term is Π|j₃|² over one sign
        let half = norm_product(&heegner_points(-23, 1, 256).unwrap().forms, 256).unwrap();
        assert_eq!(half.round(), p.coeff(0).to_integer());
        assert_eq!(n.round(), (p.coeff(0) * p.coeff(0)).to_integer());
    }

    #[test]
    fn stable_under_precision_doubling() {
        for (d, r) in [(-11, 1), (-8, 2), (-23, 1), (-20, 2), (-35, 1)] {
            assert_eq!(minimal_poly_j3(d, r, 256).unwrap(), minimal_poly_j3(d, r, 512).unwrap());
        }
    }

    #[test]
    fn denominator_at_two_thirds() {
        let poles = [PoleDatum::new(-11, 1, 3).unwrap(), PoleDatum::new(-8, 2, 3).unwrap()];
        let f = denominator_factors(&poles, 256).unwrap();
        let b = denominator_product(&f);
        let want = &Polynomial::from_i64s(&[729, -10, 1]).pow(3) * &Polynomial::from_i64s(&[729, 46, 1]).pow(3);
        assert_eq!(b, want);
    }
}

//! The numbered reproduction checks behind `verify-paper`.

use std::fmt::Display;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{rat, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::eta::{eta_quotient, named_form, NamedForm};
use crate::lift::{
    compare_with_reference, lift_expansion, mock_coefficients, scalar_preimage, LiftReport, MockCoefficientTable,
};
use crate::numerics::{chowla_selberg, eta_product_at_zu, eval_j3, recognize_algebraic, BigReal, CMPoint};
use crate::theta::{hecke_theta_eta8, theta_p, theta_p4_closed_form, unary_theta, UnaryVariant};
use crate::vector::{basis_polynomial, basis_tensor_below, kohnen_split, pairing};
use crate::{QuadElem, RationalSeries, RunConfig};

/// One line of the report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, expected: impl Display, got: impl Display, pass: bool) -> Self {
        Self {
            criterion,
            name: name.into(),
            expected: expected.to_string(),
            got: got.to_string(),
            pass,
        }
    }

    fn eq<T: PartialEq + Display>(criterion: u8, name: impl Into<String>, expected: T, got: T) -> Self {
        let pass = expected == got;
        Self::new(criterion, name, expected, got, pass)
    }

    /// `name<TAB>expected<TAB>got<TAB>PASS|FAIL`.
    pub fn line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.name,
            self.expected,
            self.got,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "eta quotient expansions"),
    (2, "theta identities"),
    (3, "pairing with the unary theta"),
    (4, "basis polynomials"),
    (5, "tensor expansions"),
    (6, "lift expansions"),
    (7, "rational identification"),
    (8, "CM numerics"),
    (9, "mock coefficients"),
    (10, "comparison with the reference preimage"),
];

type MockRun = (MockCoefficientTable, Vec<LiftReport>);

/// Runs the checks criterion by criterion, sharing the expensive pipeline.
pub struct CheckSuite {
    cfg: RunConfig,
    mock: OnceLock<std::result::Result<MockRun, Error>>,
}

fn int_coeffs(s: &crate::IntegerSeries, exps: &[i64]) -> Result<Vec<BigInt>> {
    exps.iter().map(|&e| s.coeff(&rat(e, 1))).collect()
}

fn series_checks(c: u8, label: &str, s: &crate::IntegerSeries, exps: &[i64], want: &[i64]) -> Vec<Check> {
    match int_coeffs(s, exps) {
        Ok(got) => exps
            .iter()
            .zip(want)
            .zip(got)
            .map(|((e, w), g)| Check::eq(c, format!("{label} q^{e}"), BigInt::from(*w), g))
            .collect(),
        Err(e) => vec![Check::new(c, label, "coefficients", e, false)],
    }
}

impl CheckSuite {
    /// The lift always uses divisor exponent 2 here.
    pub fn new(cfg: &RunConfig) -> Self {
        Self {
            cfg: RunConfig {
                divisor_exponent: 2,
                ..cfg.clone()
            },
            mock: OnceLock::new(),
        }
    }

    pub fn run_all(&self) -> Vec<Check> {
        CRITERIA.iter().flat_map(|(n, _)| self.criterion(*n)).collect()
    }

    pub fn criterion(&self, n: u8) -> Vec<Check> {
        let r = match n {
            1 => self.eta_expansions(),
            2 => self.theta_identities(),
            3 => self.unary_pairing(),
            4 => self.basis_polynomials(),
            5 => self.tensor_expansions(),
            6 => self.lift_expansions(),
            7 => self.identification(),
            8 => self.cm_numerics(),
            9 => self.mock_table(),
            10 => self.reference_comparison(),
            _ => Err(Error::domain(format!("no criterion {n}"))),
        };
        r.unwrap_or_else(|e| vec![Check::new(n, format!("criterion {n}"), "no error", e, false)])
    }

    fn mock(&self) -> Result<&MockRun> {
        self.mock
            .get_or_init(|| mock_coefficients(&rat(14, 3), &self.cfg.lift_params()))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn eta_expansions(&self) -> Result<Vec<Check>> {
        let mut out = series_checks(
            1,
            "eta(3z)^8",
            &eta_quotient(&"3^8".parse()?, 20),
            &[1, 4, 7, 13, 16, 19],
            &[1, -8, 20, -70, 64, 56],
        );
        out.extend(series_checks(
            1,
            "F",
            &named_form(NamedForm::F, 14),
            &[-1, 0, 3, 4, 7, 8, 11, 12],
            &[1, 10, -64, 108, -513, 808, -2752, 4016],
        ));
        out.extend(series_checks(
            1,
            "j3",
            &named_form(NamedForm::J3, 9),
            &[-1, 0, 1, 2, 3, 4, 5, 6],
            &[1, -12, 54, -76, -243, 1188, -1384, -2916],
        ));
        out.extend(series_checks(
            1,
            "w",
            &named_form(NamedForm::W, 16),
            &[-1, 2, 5, 8, 11, 14],
            &[1, 20, 176, 1020, 4794, 19360],
        ));
        Ok(out)
    }

    fn theta_identities(&self) -> Result<Vec<Check>> {
        let t = 21;
        let th = theta_p(4, t)?;
        let closed = theta_p4_closed_form(t);
        let hecke = hecke_theta_eta8(t)?;
        let e8 = eta_quotient(&"3^8".parse()?, t as usize)
            .map(|c| QuadElem::from(Rational::from_integer(c.clone())))
            .truncate(&rat(t, 1));
        Ok(vec![
            Check::new(
                2,
                "Theta_P,4 = (sqrt(-3)/3) eta^8 (phi_1 - phi_2), exponents <= 20",
                "equal",
                if th == closed { "equal" } else { "differ" },
                th == closed && th.trunc() == Some(rat(t, 1)),
            ),
            Check::eq(2, "Theta_P,4 phi_1 q^1/3", QuadElem::sqrt(-3)?.scale(&rat(1, 3)), th.component(1).coeff(&rat(1, 3))?),
            Check::new(
                2,
                "(theta_d+1 - theta_d-1)/6 = eta(3z)^8, exponents <= 20",
                "equal",
                if hecke == e8 { "equal" } else { "differ" },
                hecke == e8,
            ),
        ])
    }

    fn unary_pairing(&self) -> Result<Vec<Check>> {
        let k = kohnen_split(4 * 41 + 2);
        let p = pairing(&k, &unary_theta(UnaryVariant::Z1, 41))?;
        let twelve = RationalSeries::new(1, [(0, rat(12, 1))], None);
        let (same, upto) = p.compare(&twelve);
        let covered = upto.is_some_and(|u| u > rat(40, 1));
        Ok(vec![
            Check::eq(3, "<F, theta> constant term", rat(12, 1), p.coeff(&rat(0, 1))?),
            Check::new(
                3,
                "<F, theta> higher coefficients through q^40",
                "all zero",
                if same { "all zero".to_string() } else { format!("{}", p.truncate(&rat(41, 1))) },
                same && covered,
            ),
        ])
    }

    fn basis_polynomials(&self) -> Result<Vec<Check>> {
        Ok(vec![
            Check::eq(4, "P_1", "X - 736".to_string(), basis_polynomial(&rat(2, 3))?.pretty()),
            Check::eq(4, "P_2", "X^2 - 1480*X + 153860".to_string(), basis_polynomial(&rat(5, 3))?.pretty()),
        ])
    }

    fn tensor_expansions(&self) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        let cases: [(Rational, &str, [(i64, i64, i64); 8]); 2] = [
            (
                rat(-1, 3),
                "f_-1/3 (x) F",
                [(1, 1, 1), (1, 13, -72), (1, 25, 19), (2, 4, 10), (2, 16, 28), (2, 28, 144), (0, 0, 0), (0, 0, 0)],
            ),
            (
                rat(2, 3),
                "f_2/3 (x) F",
                [
                    (1, -11, 1),
                    (1, 1, -64),
                    (1, 13, 196327),
                    (1, 25, 7318336),
                    (2, -8, 10),
                    (2, 4, 108),
                    (2, 16, 1969208),
                    (2, 28, 220451216),
                ],
            ),
        ];
        for (m, label, printed) in cases {
            let t = basis_tensor_below(&m, &rat(3, 1))?;
            for (mu, e12, c) in printed {
                if mu == 0 {
                    continue;
                }
                // comp1 = ½(…), comp2 = −½(…)
                let sign = if mu == 1 { rat(1, 2) } else { rat(-1, 2) };
                let want = &sign * &rat(c, 1);
                let got = t.component(mu).coeff(&rat(e12, 12))?;
                out.push(Check::eq(5, format!("{label} phi_{mu} q^{}", rat(e12, 12)), want, got));
            }
            out.push(Check::new(
                5,
                format!("{label} symmetry"),
                "ok",
                t.check_symmetry().map_or_else(|e| e.to_string(), |_| "ok".into()),
                t.check_symmetry().is_ok(),
            ));
        }
        Ok(out)
    }

    fn lift_expansions(&self) -> Result<Vec<Check>> {
        let t = basis_tensor_below(&rat(-1, 3), &rat(41 * 41, 12))?;
        let l = lift_expansion(&t, 41, 2)?;
        let d = RationalSeries::from_integer_series(&named_form(NamedForm::Delta3, 41))
            .scale(&rat(1, 2))
            .truncate(&rat(41, 1));
        let mut out = vec![Check::new(
            6,
            "lift(f_-1/3 (x) F) = Delta3/2 for n <= 40",
            "equal",
            if l == d { "equal" } else { "differ" },
            l == d,
        )];
        let t2 = basis_tensor_below(&rat(2, 3), &rat(3, 1))?;
        let l2 = lift_expansion(&t2, 6, 2)?;
        for (n, c) in [(1, -32), (2, -182), (3, -288), (4, 983876), (5, -3659968)] {
            out.push(Check::eq(6, format!("lift(f_2/3 (x) F) q^{n}"), rat(c, 1), l2.coeff(&rat(n, 1))?));
        }
        Ok(out)
    }

    fn identification(&self) -> Result<Vec<Check>> {
        let (_, reports) = self.mock()?;
        let rep = reports
            .iter()
            .find(|r| r.m == rat(2, 3))
            .ok_or_else(|| Error::domain("m = 2/3 missing"))?;
        let a_printed = [
            "-9606056659007943744",
            "-1577126071845011340",
            "-145943768399337864",
            "-9521554324373244",
            "-524999237829408",
            "-23323899141720",
            "-884044074800",
            "-31994374680",
            "-987878688",
            "-24576796",
            "-516744",
            "-7660",
            "-64",
        ];
        let id = &rep.identification;
        let mut out: Vec<Check> = a_printed
            .iter()
            .enumerate()
            .map(|(i, s)| Check::eq(7, format!("A coefficient X^{i}"), s.to_string(), id.a.coeff(i).to_string()))
            .collect();
        out.push(Check::eq(7, "deg A", "12".to_string(), id.a.degree().map_or("-".into(), |d| d.to_string())));
        let b = &Polynomial::from_i64s(&[729, -10, 1]).pow(3) * &Polynomial::from_i64s(&[729, 46, 1]).pow(3);
        out.push(Check::eq(
            7,
            "B = (X^2 - 10X + 729)^3 (X^2 + 46X + 729)^3",
            b.pretty(),
            id.b.pretty(),
        ));
        let g = id.a.gcd(&id.b);
        out.push(Check::eq(7, "gcd(A, B)", "1".to_string(), g.pretty()));
        Ok(out)
    }

    fn cm_numerics(&self) -> Result<Vec<Check>> {
        let p = self.cfg.float_bits;
        let h = BigInt::from(1u64 << 40);
        let j3 = |f: &str| -> Result<_> { eval_j3(&f.parse::<CMPoint>()?.tau(p), p) };
        let mut out = Vec::new();
        let zu = eval_j3(&CMPoint::z_u().tau(p), p)?;
        out.push(Check::eq(
            8,
            "j3(z_U) minimal polynomial",
            "X + 27".to_string(),
            recognize_algebraic(&zu, 2, &h)?.poly.pretty(),
        ));
        for (form, poly, sqrt_arg, coef, sign) in [
            ("[3,1,1]", "X^2 - 10*X + 729", 11, 8, 1),
            ("[3,-1,1]", "X^2 - 10*X + 729", 11, 8, -1),
            ("[3,2,1]", "X^2 + 46*X + 729", 8, 5, 1),
            ("[3,-2,1]", "X^2 + 46*X + 729", 8, 5, -1),
        ] {
            let v = j3(form)?;
            out.push(Check::eq(
                8,
                format!("j3{form} minimal polynomial"),
                poly.to_string(),
                recognize_algebraic(&v, 2, &h)?.poly.pretty(),
            ));
            let want = &BigReal::from_i64(sign * coef, p) * &BigReal::from_i64(sqrt_arg, p).sqrt();
            let err = (&v.im - &want).abs();
            let ok = err.log2_abs().is_none_or(|e| e < -100);
            let sgn = if sign > 0 { "" } else { "-" };
            out.push(Check::new(
                8,
                format!("Im j3{form}"),
                format!("{sgn}{coef}*sqrt({sqrt_arg})"),
                v.im.to_decimal(20),
                ok,
            ));
        }
        let om = chowla_selberg(p)?;
        out.push(Check::new(8, "Omega_-3", "0.64092738", om.to_decimal(20), om.agrees_with_decimal("0.64092738")));
        let prod = eta_product_at_zu(p)?;
        out.push(Check::new(
            8,
            "eta(z_U)^6 eta(3z_U)^6",
            "-0.36019264",
            prod.re.to_decimal(20),
            prod.re.agrees_with_decimal("-0.36019264") && prod.im.abs().to_f64() < 1e-30,
        ));
        let rhs = &(&BigReal::from_i64(-3, p) * &BigReal::from_i64(3, p).sqrt()) * &om.powi(6);
        let rel = &(&prod.re - &rhs).abs() / &rhs.abs();
        let tol = BigReal::from_rational(&Rational::new(BigInt::one(), BigInt::from(10).pow(30)), p);
        out.push(Check::new(
            8,
            "eta(z_U)^6 eta(3z_U)^6 = -3 sqrt(3) Omega^6 (relative error)",
            "< 1e-30",
            rel.to_decimal(3),
            rel < tol,
        ));
        Ok(out)
    }

    fn mock_table(&self) -> Result<Vec<Check>> {
        let (table, _) = self.mock()?;
        let printed = [
            ((2, 3), (-61, 1)),
            ((5, 3), (-65804, 125)),
            ((8, 3), (-1566912, 512)),
            ((11, 3), (-19145526, 1331)),
            ((14, 3), (-159360544, 2744)),
        ];
        let mut out = Vec::new();
        for ((mn, md), (n, d)) in printed {
            let m = rat(mn, md);
            let got = table.get(&m).cloned().unwrap_or_else(Rational::zero);
            out.push(Check::eq(9, format!("r_{m}"), rat(n, d), got));
        }
        Ok(out)
    }

    fn reference_comparison(&self) -> Result<Vec<Check>> {
        let (table, _) = self.mock()?;
        let checks = compare_with_reference(&scalar_preimage(table))?;
        let mut out: Vec<Check> = checks
            .iter()
            .map(|c| Check::eq(10, format!("preimage + 3/4 w at q^{}", c.exponent), c.expected.clone(), c.combined.clone()))
            .collect();
        out.push(Check::eq(10, "compared exponents", 6, out.len()));
        Ok(out)
    }
}

/// Every check with default settings.
pub fn run_checks(cfg: &RunConfig) -> Vec<Check> {
    CheckSuite::new(cfg).run_all()
}

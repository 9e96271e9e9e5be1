use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use maass_core::arith::parse_rational;
use maass_core::eta::{eta_quotient, named_form, EtaQuotientSpec, NamedForm};
use maass_core::lift::{lift_expansion, minimal_poly_j3, mock_coefficients, run_lift, scalar_preimage};
use maass_core::numerics::{eval_j3, recognize_algebraic, BigComplex, BigReal, CMPoint};
use maass_core::theta::theta_p;
use maass_core::vector::{basis_fm, basis_polynomial, basis_tensor_below};
use maass_core::verify::CheckSuite;
use maass_core::{Error, OutputFormat, Polynomial, Rational, RunConfig};
use serde_json::{json, Value};

mod render;
use render::*;

#[derive(Parser)]
#[command(name = "maass", version, about = "Exact q-series for the xi-preimage of eta(3z)^8")]
struct Cli {
    /// Number of q-expansion terms [env: MAASS_TERMS] [default: 60]
    #[arg(long, global = true)]
    terms: Option<usize>,
    /// Working precision of CM evaluations [env: MAASS_FLOAT_BITS] [default: 256]
    #[arg(long, global = true)]
    float_bits: Option<usize>,
    /// Exponent e in the lift's divisor sum
    #[arg(long, global = true)]
    divisor_exponent: Option<u32>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an eta quotient such as "1^-1 3^9"
    EtaExpand {
        #[arg(long)]
        spec: String,
    },
    /// Expand one of F, j, j3, Delta3, w, eta8
    Named {
        #[arg(long)]
        form: String,
    },
    /// Vector theta of the Eisenstein integers, one coset
    Theta {
        #[arg(long = "D", alias = "d", default_value_t = 3)]
        d: i64,
        #[arg(long, default_value_t = 1)]
        coset: i64,
        #[arg(long, default_value_t = 4)]
        k: u32,
    },
    /// Basis polynomial and vector form f_m
    Basis {
        #[arg(long, value_parser = parse_m)]
        m: Rational,
    },
    /// Components of f_m (x) F on Z/6
    Tensor {
        #[arg(long, value_parser = parse_m)]
        m: Rational,
    },
    /// Lift of f_m (x) F, its pole data and A, B
    Lift {
        #[arg(long, value_parser = parse_m)]
        m: Rational,
    },
    /// Mock coefficient table up to m and the scalar preimage
    Mock {
        #[arg(long, value_parser = parse_m, default_value = "14/3")]
        max_m: Rational,
    },
    /// Evaluate j3 at the CM point of a form "[a,b,c]"
    CmEval {
        #[arg(long)]
        form: String,
    },
    /// Run every reproduction check
    VerifyPaper,
}

fn parse_m(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    stage: &'static str,
    err: Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.err)
    }
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure>;
}

impl<T> Stage<T> for maass_core::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, Failure> {
        self.map_err(|err| Failure { stage, err })
    }
}

/// What a command produced, in both renderings.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Self { text, json, ok: true }
    }
}

fn config(cli: &Cli) -> Result<RunConfig, Failure> {
    let expansion_only = matches!(cli.cmd, Command::EtaExpand { .. } | Command::Named { .. } | Command::Theta { .. });
    let mut c = RunConfig::default()
        .with_env(|k| std::env::var(k).ok())
        .stage("config")?;
    if let Some(t) = cli.terms {
        c.terms = t;
    }
    if let Some(b) = cli.float_bits {
        c.float_bits = b;
    }
    if let Some(e) = cli.divisor_exponent {
        c.divisor_exponent = e;
    }
    if let Some(f) = cli.format {
        c.output_format = f;
    }
    // plain expansions may be short; the floor on terms is for the pipeline
    if expansion_only && c.terms >= 1 {
        RunConfig { terms: 8, ..c.clone() }.validate()
    } else {
        c.validate()
    }
    .stage("config")?;
    Ok(c)
}

fn eval_poly(p: &Polynomial<Rational>, x: &BigComplex) -> BigComplex {
    let prec = x.prec();
    p.coeffs().iter().rev().fold(BigComplex::from_i64(0, prec), |acc, c| {
        &(&acc * x) + &BigComplex::from_real(BigReal::from_rational(c, prec))
    })
}

fn run(cmd: &Command, cfg: &RunConfig) -> Result<Output, Failure> {
    let t = cfg.terms;
    Ok(match cmd {
        Command::EtaExpand { spec } => {
            let spec: EtaQuotientSpec = spec.parse().stage("eta-expand")?;
            let s = eta_quotient(&spec, t);
            Output::new(s.dump(), series_json(&s))
        }
        Command::Named { form } => {
            let f: NamedForm = form.parse().stage("named")?;
            let s = named_form(f, t);
            Output::new(s.dump(), series_json(&s))
        }
        Command::Theta { d, coset, k } => {
            if *d != 3 {
                return Err(Failure {
                    stage: "theta",
                    err: Error::Domain(format!("only D = 3 is implemented, got {d}")),
                });
            }
            let v = theta_p(*k, t as i64).stage("theta")?;
            let s = v.component(*coset);
            Output::new(s.dump(), series_json(s))
        }
        Command::Basis { m } => {
            let p = basis_polynomial(m).stage("basis")?;
            let f = basis_fm(m, t).stage("basis")?;
            Output::new(
                format!("P\t{p}\n{}", vector_text(&f)),
                json!({"m": m.to_string(), "polynomial": poly_json(&p), "form": vector_json(&f)}),
            )
        }
        Command::Tensor { m } => {
            let v = basis_tensor_below(m, &Rational::from_integer((t as i64).into())).stage("tensor")?;
            Output::new(vector_text(&v), json!({"m": m.to_string(), "form": vector_json(&v)}))
        }
        Command::Lift { m } => lift(m, cfg)?,
        Command::Mock { max_m } => {
            let (table, _) = mock_coefficients(max_m, &cfg.lift_params()).stage("mock")?;
            let pre = scalar_preimage(&table);
            let mut text = String::new();
            for (m, r) in &table.entries {
                text.push_str(&format!("{m}  {r}\n"));
            }
            text.push_str("# scalar preimage\n");
            text.push_str(&pre.dump());
            let rows: Vec<Value> = table
                .entries
                .iter()
                .map(|(m, r)| json!([m.to_string(), r.to_string()]))
                .collect();
            Output::new(text, json!({"coefficients": rows, "preimage": series_json(&pre)}))
        }
        Command::CmEval { form } => cm_eval(form, cfg)?,
        Command::VerifyPaper => {
            let checks = CheckSuite::new(cfg).run_all();
            let passed = checks.iter().filter(|c| c.pass).count();
            let mut text: String = checks.iter().map(|c| c.line() + "\n").collect();
            text.push_str(&format!("# {passed}/{} checks passed\n", checks.len()));
            let rows: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({"criterion": c.criterion, "name": c.name, "expected": c.expected, "got": c.got, "pass": c.pass})
                })
                .collect();
            let ok = passed == checks.len();
            Output {
                text,
                json: json!({"checks": rows, "pass": ok}),
                ok,
            }
        }
    })
}

fn lift(m: &Rational, cfg: &RunConfig) -> Result<Output, Failure> {
    let n = cfg.terms;
    let x = Rational::new(((n * n) as i64).into(), 12.into()) + Rational::from_integer(1.into());
    let f = basis_tensor_below(m, &x).stage("tensor")?;
    let series = lift_expansion(&f, n, cfg.divisor_exponent).stage("lift expansion")?;
    let report = run_lift(m, &cfg.lift_params()).stage("identification")?;
    let id = &report.identification;
    let poles: Vec<String> = report.poles.iter().map(|p| p.to_string()).collect();
    let mut text = format!("# lift\n{}", series.dump());
    text.push_str(&format!("poles\t{}\n", poles.join(" ")));
    text.push_str(&format!("A\t{}\nB\t{}\n", id.a, id.b));
    text.push_str(&format!("value\t{}\n", report.value));
    let json = json!({
        "m": m.to_string(),
        "lift": series_json(&series),
        "poles": poles,
        "A": poly_json(&id.a),
        "B": poly_json(&id.b),
        "value": report.value.to_string(),
    });
    Ok(Output::new(text, json))
}

fn cm_eval(form: &str, cfg: &RunConfig) -> Result<Output, Failure> {
    let p = cfg.float_bits;
    let pt: CMPoint = form.parse().stage("cm-eval")?;
    let v = eval_j3(&pt.tau(p), p).stage("cm-eval")?;
    let [a, b, _] = pt.form();
    // Heegner points for Γ₀(3) get their full class polynomial
    let poly = if a % 3 == 0 {
        minimal_poly_j3(pt.disc(), b, p).stage("recognition")?
    } else {
        let h = maass_core::Integer::from(1u64 << 40);
        recognize_algebraic(&v, 2, &h).stage("recognition")?.poly
    };
    let res = eval_poly(&poly, &v).abs();
    let residual = if res.is_zero() {
        "0".to_string()
    } else {
        format!("2^{}", res.log2_abs().unwrap_or(0))
    };
    let digits = (p as f64 * std::f64::consts::LOG10_2) as usize / 2;
    let (re, im) = (v.re.to_decimal(digits), v.im.to_decimal(digits));
    let text = format!("form\t{pt}\nre\t{re}\nim\t{im}\npoly\t{poly}\nresidual\t{residual}\n");
    let json = json!({"form": pt.to_string(), "re": re, "im": im, "poly": poly_json(&poly), "residual": residual});
    Ok(Output::new(text, json))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = config(&cli).and_then(|cfg| run(&cli.cmd, &cfg).map(|o| (o, cfg.output_format)));
    match result {
        Ok((out, fmt)) => {
            match fmt {
                OutputFormat::Text => print!("{}", out.text),
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            // a bad configuration is a usage error
            ExitCode::from(if f.stage == "config" { 2 } else { 1 })
        }
    }
}

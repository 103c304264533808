use std::fmt::Display;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use apery_bessel::annihilator::{symmetric_power, BaseEquation};
use apery_bessel::numerics::{zeta3, BigReal, MomentIntegrator, QuadratureSpec};
use apery_bessel::pipeline::{
    bessel_fan_with, constants_5_6_with, derive_chain, fixtures, theorem_d4_with, FixtureCheck, Verdict,
};
use apery_bessel::sequences::{
    apery_limit, asymptotic_fit, factorial_square_rescale, gamma_rescale_ode, moment_recurrence,
    operator_to_recurrence, solve_series, verrill_coefficients, Recurrence,
};
use apery_bessel::theta::ThetaOperator;
use apery_bessel::{rat, Rational};

// stdout writes that tolerate a closed pipe (`| head`)
macro_rules! println {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

macro_rules! print {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "apery-bessel", version, about = "Annihilators, moment recurrences and mirror equations for Bessel powers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Base {
    #[value(name = "K0")]
    K0,
    #[value(name = "SQRT")]
    Sqrt,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Fixtures,
    MainTheorem,
    TheoremD4,
    Constants,
    MomentRec,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct Numeric {
    /// Working precision in decimal digits.
    #[arg(long, default_value_t = 50)]
    prec: u32,
    /// Evaluate the quadrature at this fixed level instead of refining.
    #[arg(long = "quad-level")]
    quad_level: Option<u32>,
}

impl Numeric {
    fn integrator(&self) -> MomentIntegrator {
        let spec = self.quad_level.map(QuadratureSpec::at_level).unwrap_or_default();
        MomentIntegrator::new(self.prec, spec)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Annihilator of K0(x)^m (base K0) or of (sum x^n/n!^2)^m (base SQRT).
    Annihilator {
        #[arg(long, value_enum, default_value = "K0")]
        base: Base,
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Step-2 recurrence for the moments c_{m,k}.
    MomentRec {
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Equation for sum d_n x^n with d_n = r^(2n)/n!^2 c_{m,2n+1}, and its recurrence.
    DOde {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "1/2")]
        r: Rational,
        #[command(flatten)]
        common: Common,
    },
    /// The d-equation moved to infinity with x -> 1/(c x).
    Mirror {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value = "1/2")]
        r: Rational,
        #[arg(long, default_value = "1")]
        c: Rational,
        #[command(flatten)]
        common: Common,
    },
    /// A_0..A_N, the sums of squared multinomial coefficients.
    Verrill {
        #[arg(long)]
        m: u32,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Annihilator of sum A_n x^n from the rescaled SQRT ladder.
    VerrillOde {
        #[arg(long)]
        m: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Solves the d-recurrence (or the recurrence given with --rec) from --init.
    Solve {
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, default_value = "1/2")]
        r: Rational,
        /// Recurrence in the backward text form, e.g. "n^2 - N*(...)".
        #[arg(long)]
        rec: Option<String>,
        /// Comma-separated initial values.
        #[arg(long, value_delimiter = ',', required = true)]
        init: Vec<Rational>,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Limits of B_N/A_N (and C_N/A_N) for the d-recurrence of m = 4, 5, 6.
    AperyLimit {
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long = "N", default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        prec: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Fits A_n ~ C n^b lambda^n on a window of the Verrill sequence.
    Asympt {
        #[arg(long, default_value_t = 4)]
        m: u32,
        #[arg(long = "n-lo", default_value_t = 100)]
        n_lo: usize,
        #[arg(long = "n-hi", default_value_t = 400)]
        n_hi: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Bessel moments c_{m,k} for k in k-min..=k-max.
    Moments {
        #[arg(long)]
        m: u32,
        #[arg(long = "k-min", default_value_t = 0)]
        k_min: u32,
        #[arg(long = "k-max", default_value_t = 5)]
        k_max: u32,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        common: Common,
    },
    /// Verification suites.
    Verify {
        #[arg(long, value_enum, default_value = "fixtures")]
        check: Check,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        #[arg(long = "k-max", default_value_t = 9)]
        k_max: u32,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        common: Common,
    },
    /// The Bessel-fan identity for the even moments.
    Fan {
        #[arg(long)]
        m: u32,
        #[arg(long = "N", default_value_t = 30)]
        n: usize,
        /// Skip the quadrature cross-check.
        #[arg(long)]
        exact_only: bool,
        #[command(flatten)]
        numeric: Numeric,
        #[command(flatten)]
        common: Common,
    },
    /// The full derivation chain for one m, with every stage comparison.
    Report {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "1/2")]
        r: Rational,
        #[arg(long, default_value = "1")]
        c: Rational,
        #[arg(long = "N", default_value_t = 40)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// How a run ended.
enum Failure {
    /// Bad flags; exit 2.
    Usage(String),
    /// A computation raised an error; exit 1.
    Compute(String),
    /// A check ran and failed; exit 1. The report has been printed.
    Verification,
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// `Kind::Variant: message` for an error value.
fn compute<E: std::fmt::Debug + Display>(module: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| {
        let debug = format!("{e:?}");
        let variant: String = debug.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        Failure::Compute(format!("{module}::{variant}: {e}"))
    }
}

fn need_m(m: i64, min: i64, max: i64) -> Outcome {
    if (min..=max).contains(&m) {
        Ok(())
    } else {
        Err(usage(format!("--m must be in {min}..={max}, got {m}")))
    }
}

fn nonzero(name: &str, v: &Rational) -> Outcome {
    if v.is_zero() {
        Err(usage(format!("--{name} must be nonzero")))
    } else {
        Ok(())
    }
}

fn print_json<T: Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn verdict_line(pass: bool, what: &str) -> String {
    format!("{} {what}", if pass { "PASS" } else { "FAIL" })
}

fn finish(pass: bool) -> Outcome {
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn k0_power(m: i64) -> Result<ThetaOperator, Failure> {
    symmetric_power(BaseEquation::BesselK, m).map_err(compute("AnnihilatorError"))
}

/// The stored fixture this derivation corresponds to, if any.
fn matching_fixture(pred: impl Fn(&fixtures::Fixture) -> bool) -> Result<Option<FixtureCheck>, Failure> {
    match fixtures::all().into_iter().find(|f| pred(f)) {
        Some(f) => f.check().map(Some).map_err(compute("PipelineError")),
        None => Ok(None),
    }
}

fn fixture_line(c: &FixtureCheck) -> String {
    if c.exact {
        verdict_line(true, &format!("matches fixture {}", c.name))
    } else if c.errata_confirmed {
        let terms: Vec<&str> = c.discrepancies.iter().map(|d| d.term.as_str()).collect();
        verdict_line(true, &format!("matches fixture {} except the known misprint in {}", c.name, terms.join(", ")))
    } else {
        verdict_line(false, &format!("differs from fixture {}", c.name))
    }
}

/// Operator output plus the verdict against a stored fixture when one exists.
fn emit_operator(op: &ThetaOperator, extra: serde_json::Value, fixture: Option<FixtureCheck>, fmt: Format) -> Outcome {
    let pass = fixture.as_ref().is_none_or(|c| c.exact || c.errata_confirmed);
    match fmt {
        Format::Text => {
            println!("{}", op.to_grouped_string());
            if let Some(c) = &fixture {
                println!("{}", fixture_line(c));
                c.discrepancies.iter().for_each(|d| println!("  {d}"));
            }
        }
        Format::Json => {
            let mut v = json!({ "operator": op, "text": op.to_grouped_string() });
            if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
                obj.extend(more);
            }
            if let Some(c) = &fixture {
                v["fixture"] = serde_json::to_value(c).expect("fixture check serializes");
                v["verdict"] = json!(if pass { "PASS" } else { "FAIL" });
            }
            print_json(&v);
        }
    }
    finish(pass)
}

fn d_recurrence_for(m: u32) -> Result<(Recurrence, Rational), Failure> {
    let r = match m {
        4 => rat(4, 1),
        5 => rat(15, 1),
        6 => rat(48, 1),
        _ => return Err(usage(format!("apery-limit supports --m 4, 5 or 6, got {m}"))),
    };
    let t = k0_power(m as i64)?;
    let d = gamma_rescale_ode(&t, &r).map_err(compute("SequenceError"))?;
    Ok((operator_to_recurrence(&d), r))
}

fn unit(len: usize, i: usize) -> Vec<Rational> {
    (0..len).map(|j| if i == j { rat(1, 1) } else { rat(0, 1) }).collect()
}

/// Number of leading decimal digits on which two values agree.
fn agreeing_digits(a: &BigReal, b: &BigReal) -> u32 {
    let diff = a.abs_diff(b);
    if diff.is_zero() {
        return a.prec().min(b.prec());
    }
    let d = -(diff.log2_abs() * std::f64::consts::LOG10_2);
    d.clamp(0.0, a.prec().min(b.prec()) as f64).floor() as u32
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Annihilator { base, m, common } => {
            need_m(m, 1, 24)?;
            let base = match base {
                Base::K0 => BaseEquation::BesselK,
                Base::Sqrt => BaseEquation::SqrtExp,
            };
            let op = symmetric_power(base, m).map_err(compute("AnnihilatorError"))?;
            emit_operator(&op, json!({ "m": m }), None, common.format)
        }
        Command::MomentRec { m, common } => {
            need_m(m, 1, 24)?;
            let rec = moment_recurrence(&k0_power(m)?).map_err(compute("SequenceError"))?;
            let fixture = matching_fixture(|f| f.step == 2 && f.m as i64 == m)?;
            let pass = fixture.as_ref().is_none_or(|c| c.exact);
            match common.format {
                Format::Text => {
                    println!("{}", rec.to_forward_string("k"));
                    if let Some(c) = &fixture {
                        println!("{}", fixture_line(c));
                    }
                }
                Format::Json => print_json(&json!({
                    "m": m,
                    "recurrence": rec,
                    "forward": rec.to_forward_string("k"),
                    "fixture": fixture,
                })),
            }
            finish(pass)
        }
        Command::DOde { m, r, common } => {
            need_m(m, 1, 24)?;
            nonzero("r", &r)?;
            let op = gamma_rescale_ode(&k0_power(m)?, &r).map_err(compute("SequenceError"))?;
            let rec = operator_to_recurrence(&op);
            let fixture =
                matching_fixture(|f| f.kind == fixtures::FixtureKind::Operator && f.c.is_none() && f.m as i64 == m && f.r.as_ref() == Some(&r))?;
            if common.format == Format::Text {
                println!("recurrence: {}", rec.to_forward_string("n"));
            }
            emit_operator(&op, json!({ "m": m, "r": r.to_string(), "recurrence": rec }), fixture, common.format)
        }
        Command::Mirror { m, r, c, common } => {
            need_m(m, 1, 24)?;
            nonzero("r", &r)?;
            nonzero("c", &c)?;
            let d = gamma_rescale_ode(&k0_power(m)?, &r).map_err(compute("SequenceError"))?;
            let op = d.mirror_at_infinity(&c).map_err(compute("ThetaError"))?;
            let fixture = matching_fixture(|f| f.m as i64 == m && f.r.as_ref() == Some(&r) && f.c.as_ref() == Some(&c))?;
            emit_operator(&op, json!({ "m": m, "r": r.to_string(), "c": c.to_string() }), fixture, common.format)
        }
        Command::Verrill { m, n, common } => {
            if m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            let t = verrill_coefficients(m, n).map_err(compute("SequenceError"))?;
            match common.format {
                Format::Text => t.values.iter().for_each(|v| println!("{v}")),
                Format::Json => print_json(&json!({ "m": m, "table": t })),
            }
            Ok(())
        }
        Command::VerrillOde { m, common } => {
            need_m(m, 1, 24)?;
            let s = symmetric_power(BaseEquation::SqrtExp, m).map_err(compute("AnnihilatorError"))?;
            emit_operator(&factorial_square_rescale(&s).normalize(), json!({ "m": m }), None, common.format)
        }
        Command::Solve { m, r, rec, init, n, common } => {
            let rec = match (rec, m) {
                (Some(text), None) => text.parse::<Recurrence>().map_err(|e| usage(format!("--rec: {e}")))?,
                (None, Some(m)) => {
                    need_m(m, 1, 24)?;
                    nonzero("r", &r)?;
                    operator_to_recurrence(&gamma_rescale_ode(&k0_power(m)?, &r).map_err(compute("SequenceError"))?)
                }
                _ => return Err(usage("give exactly one of --m and --rec")),
            };
            let t = solve_series(&rec, &init, n).map_err(compute("SequenceError"))?;
            match common.format {
                Format::Text => print!("{}", t.to_tab()),
                Format::Json => print_json(&json!({ "recurrence": rec, "table": t })),
            }
            Ok(())
        }
        Command::AperyLimit { m, n, prec, common } => {
            if prec == 0 || n < 2 {
                return Err(usage("--prec and --N must be positive (N >= 2)"));
            }
            let (rec, r) = d_recurrence_for(m)?;
            let order = rec.order();
            // A_n^(4) = 1, 4, 28, ... ; for m = 5, 6 the basis is the unit vectors
            let a = if m == 4 { vec![rat(1, 1), rat(4, 1)] } else { unit(order, 0) };
            let limits: Vec<BigReal> = (1..order)
                .map(|i| apery_limit(&rec, &a, &unit(order, i), n, prec))
                .collect::<Result<_, _>>()
                .map_err(compute("SequenceError"))?;
            let names = ["B", "C"];
            if m == 4 {
                let reference = zeta3(prec + 5).scale(&rat(7, 24));
                let digits = agreeing_digits(&limits[0], &reference);
                let need = prec.saturating_sub(5).max(1);
                let pass = digits >= need;
                match common.format {
                    Format::Text => {
                        println!("{}", verdict_line(pass, &format!("B_N/A_N agrees with 7/24 zeta(3) to {digits} digits (need {need})")));
                        println!("B_{n}/A_{n}     = {}", limits[0]);
                        println!("7/24 zeta(3) = {}", reference.to_decimal());
                    }
                    Format::Json => print_json(&json!({
                        "verdict": if pass { "PASS" } else { "FAIL" },
                        "m": m, "N": n, "r": r.to_string(),
                        "limit": limits[0], "reference": reference, "agreeing_digits": digits,
                    })),
                }
                return finish(pass);
            }
            match common.format {
                Format::Text => {
                    for (name, l) in names.iter().zip(&limits) {
                        println!("{name}_{n}/A_{n} = {l}");
                    }
                }
                Format::Json => print_json(&json!({ "m": m, "N": n, "r": r.to_string(), "limits": limits })),
            }
            Ok(())
        }
        Command::Asympt { m, n_lo, n_hi, common } => {
            if m == 0 {
                return Err(usage("--m must be at least 1"));
            }
            if n_lo < 2 || n_hi < n_lo + 8 {
                return Err(usage("need --n-lo >= 2 and --n-hi >= --n-lo + 8"));
            }
            let t = verrill_coefficients(m, n_hi).map_err(compute("SequenceError"))?;
            let fit = asymptotic_fit(&t, n_lo, n_hi).map_err(compute("SequenceError"))?;
            let check = (m == 4).then(|| {
                (fit.lambda.to_f64() / 16.0 - 1.0).abs() < 1e-5
                    && (fit.b.to_f64() + 1.5).abs() < 1e-2
                    && (fit.c.to_f64() - 0.36).abs() < 0.02
            });
            match common.format {
                Format::Text => {
                    if let Some(pass) = check {
                        println!("{}", verdict_line(pass, "A_n ~ 0.36 16^n / n^(3/2)"));
                    }
                    println!("lambda = {}\nb      = {}\nC      = {}\nresidual at n = {n_hi}: {:.3e}", fit.lambda, fit.b, fit.c, fit.residual);
                }
                Format::Json => {
                    let mut v = json!({ "m": m, "n_lo": n_lo, "n_hi": n_hi, "fit": fit });
                    if let Some(pass) = check {
                        v["verdict"] = json!(if pass { "PASS" } else { "FAIL" });
                    }
                    print_json(&v);
                }
            }
            finish(check.unwrap_or(true))
        }
        Command::Moments { m, k_min, k_max, numeric, common } => {
            if m == 0 || k_min > k_max || numeric.prec == 0 {
                return Err(usage("need --m >= 1, --k-min <= --k-max and --prec >= 1"));
            }
            let integrator = numeric.integrator();
            let rows: Vec<(u32, BigReal)> = (k_min..=k_max)
                .map(|k| integrator.moment(m, k).map(|v| (k, v)))
                .collect::<Result<_, _>>()
                .map_err(compute("NumericsError"))?;
            match common.format {
                Format::Text => rows.iter().for_each(|(k, v)| println!("c_{{{m},{k}}} = {v}")),
                Format::Json => print_json(
                    &rows.iter().map(|(k, v)| json!({ "m": m, "k": k, "value": v })).collect::<Vec<_>>(),
                ),
            }
            Ok(())
        }
        Command::Verify { check, m, n, k_max, numeric, common } => verify(check, m, n, k_max, &numeric, common.format),
        Command::Fan { m, n, exact_only, numeric, common } => {
            if m == 0 || m > 8 {
                return Err(usage(format!("--m must be in 1..=8, got {m}")));
            }
            let integrator = (!exact_only).then(|| numeric.integrator());
            let report = bessel_fan_with(m, n, integrator.as_ref()).map_err(compute("PipelineError"))?;
            emit_report(&report, &format!("Bessel fan m = {m} to order {n}"), common.format)
        }
        Command::Report { m, r, c, n, common } => {
            if !(1..=12).contains(&m) {
                return Err(usage(format!("--m must be in 1..=12, got {m}")));
            }
            nonzero("r", &r)?;
            nonzero("c", &c)?;
            let report = derive_chain(m, &r, &c, n).map_err(compute("PipelineError"))?;
            emit_report(&report, &format!("derivation chain m = {m}"), common.format)
        }
    }
}

fn emit_report<R: Verdict + Serialize>(report: &R, what: &str, fmt: Format) -> Outcome {
    let verdict = report.verdict();
    let pass = verdict.is_ok();
    let what = match &verdict {
        Ok(()) => what.to_string(),
        Err(e) => format!("{what}: {e}"),
    };
    match fmt {
        Format::Text => {
            println!("{}", verdict_line(pass, &what));
            print!("{}", report.to_text());
        }
        Format::Json => print_json(&json!({
            "verdict": if pass { "PASS" } else { "FAIL" },
            "summary": what,
            "report": report,
        })),
    }
    finish(pass)
}

fn verify(check: Check, m: Option<u32>, n: usize, k_max: u32, numeric: &Numeric, fmt: Format) -> Outcome {
    match check {
        Check::Fixtures => {
            let checks: Vec<FixtureCheck> = fixtures::all()
                .iter()
                .filter(|f| m.is_none_or(|m| f.m == m))
                .map(|f| f.check())
                .collect::<Result<_, _>>()
                .map_err(compute("PipelineError"))?;
            let pass = checks.iter().all(|c| c.exact || c.errata_confirmed);
            let discrepancies: Vec<_> = checks.iter().flat_map(|c| c.discrepancies.iter()).collect();
            match fmt {
                Format::Text => {
                    println!("{}", verdict_line(pass, &format!("{} fixtures", checks.len())));
                    for c in &checks {
                        let state = if c.exact {
                            "exact"
                        } else if c.errata_confirmed {
                            "known misprint"
                        } else {
                            "MISMATCH"
                        };
                        println!("  {:<16} {:<28} {state}", c.id, c.name);
                    }
                    if !discrepancies.is_empty() {
                        println!("discrepancies:");
                        discrepancies.iter().for_each(|d| println!("  {d}"));
                    }
                }
                Format::Json => print_json(&json!({
                    "verdict": if pass { "PASS" } else { "FAIL" },
                    "fixtures": checks,
                })),
            }
            finish(pass)
        }
        Check::MainTheorem => {
            let ms: Vec<u32> = m.map(|m| vec![m]).unwrap_or_else(|| (3..=7).collect());
            if ms.iter().any(|m| !(3..=8).contains(m)) {
                return Err(usage("--m must be in 3..=8"));
            }
            let reports: Vec<_> = ms
                .iter()
                .map(|&m| derive_chain(m, &rat(1, 2), &rat(1, 1), n))
                .collect::<Result<_, _>>()
                .map_err(compute("PipelineError"))?;
            let pass = reports.iter().all(|r| r.passed());
            match fmt {
                Format::Text => {
                    println!("{}", verdict_line(pass, &format!("operator at infinity equals rescaled S_m for m in {ms:?}, series order {n}")));
                    reports.iter().for_each(|r| print!("{}", r.to_text()));
                }
                Format::Json => print_json(&json!({ "verdict": if pass { "PASS" } else { "FAIL" }, "reports": reports })),
            }
            finish(pass)
        }
        Check::TheoremD4 => {
            if n < 2 {
                return Err(usage("--N must be at least 2"));
            }
            let report = theorem_d4_with(&numeric.integrator(), n).map_err(compute("PipelineError"))?;
            emit_report(&report, &format!("d_n = 7/8 A_n zeta(3) - 3 B_n for n <= {n}"), fmt)
        }
        Check::Constants => {
            if numeric.prec < 30 {
                return Err(usage("--prec must be at least 30"));
            }
            let report = constants_5_6_with(&numeric.integrator()).map_err(compute("PipelineError"))?;
            emit_report(&report, "c_{5,5}, c_{6,5} relations and d_n bases for m = 5, 6", fmt)
        }
        Check::MomentRec => {
            let m = m.unwrap_or(4);
            if !(3..=7).contains(&m) || k_max > 13 {
                return Err(usage("need --m in 3..=7 and --k-max <= 13"));
            }
            let report = apery_bessel::numerics::verify_moment_recurrence(&numeric.integrator(), m, k_max)
                .map_err(compute("NumericsError"))?;
            let digits = numeric.prec.saturating_sub(8);
            let pass = !report.rows.is_empty() && report.max_relative < 10f64.powi(-(digits as i32));
            match fmt {
                Format::Text => {
                    println!(
                        "{}",
                        verdict_line(pass, &format!("moment recurrence m = {m} on c_{{{m},0..={k_max}}}: max relative residual {:.3e}", report.max_relative))
                    );
                    println!("{}", report.recurrence);
                    report.rows.iter().for_each(|r| println!("  k = {:<2} {:.3e}", r.k, r.relative));
                }
                Format::Json => print_json(&json!({ "verdict": if pass { "PASS" } else { "FAIL" }, "report": report })),
            }
            finish(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

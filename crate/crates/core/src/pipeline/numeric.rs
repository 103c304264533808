use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{check_range, PipelineError, Verdict};
use crate::annihilator::{symmetric_power, BaseEquation};
use crate::numerics::{bits_for, ten_pow_neg, zeta3, BigReal, Float, MomentIntegrator, QuadratureSpec};
use crate::sequences::{gamma_rescale_ode, moment_recurrence, operator_to_recurrence, solve_series, Recurrence};
use crate::{rat, Rational};

/// One numeric identity `lhs = rhs`, tested at `|lhs − rhs| < 10^-digits`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    pub label: String,
    pub lhs: BigReal,
    pub rhs: BigReal,
    /// `|lhs − rhs|` as a decimal string.
    pub residual: String,
    pub digits: u32,
    /// The residual is relative to `max(1, |rhs|)`.
    pub relative: bool,
    pub pass: bool,
}

impl IdentityRow {
    fn new(label: impl Into<String>, lhs: BigReal, rhs: BigReal, digits: u32) -> Self {
        let diff = lhs.abs_diff(&rhs);
        Self::judge(label.into(), lhs, rhs, diff, digits, false)
    }

    /// Compares `|lhs − rhs| / max(1, |rhs|)` instead.
    fn relative(label: impl Into<String>, lhs: BigReal, rhs: BigReal, digits: u32) -> Self {
        let mut diff = lhs.abs_diff(&rhs);
        if rhs.value().cmp_abs(&Float::one()).is_gt() {
            diff = diff.div(&rhs.value().abs(), 64);
        }
        Self::judge(label.into(), lhs, rhs, diff, digits, true)
    }

    fn judge(label: String, lhs: BigReal, rhs: BigReal, diff: Float, digits: u32, relative: bool) -> Self {
        let bits = lhs.bits().max(rhs.bits());
        let pass = diff.cmp_abs(&ten_pow_neg(digits, bits)).is_lt();
        IdentityRow { label, residual: diff.to_decimal(3), lhs, rhs, digits, relative, pass }
    }

    fn text(&self) -> String {
        format!(
            "  {:<5} {}\n    lhs {}\n    rhs {}\n    {} = {} (need < 1e-{})\n",
            if self.pass { "ok" } else { "FAIL" },
            self.label,
            self.lhs.to_decimal(),
            self.rhs.to_decimal(),
            if self.relative { "relative residual" } else { "|lhs - rhs|" },
            self.residual,
            self.digits
        )
    }

    fn check(&self) -> Result<(), PipelineError> {
        if self.pass {
            Ok(())
        } else {
            Err(PipelineError::ToleranceExceeded { what: self.label.clone(), residual: self.residual.clone() })
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `d_n = r^{2n}/n!²·c_{m,2n+1}` from quadrature.
fn quadrature_d(integrator: &MomentIntegrator, m: u32, r: i64, n: usize) -> Result<BigReal, PipelineError> {
    let c = integrator.moment(m, 2 * n as u32 + 1)?;
    let f = factorial(n);
    let w = Rational::new(BigInt::from(r).pow(2 * n as u32), &f * &f);
    Ok(c.scale(&w))
}

/// Runs a step-1 recurrence forward on real values.
fn solve_real(rec: &Recurrence, init: &[BigReal], n_max: usize) -> Vec<BigReal> {
    let mut v: Vec<BigReal> = init.to_vec();
    let prec = init[0].prec();
    for n in v.len()..=n_max {
        let lead = rec.coeff(0).eval_int(n as i64);
        let mut acc = BigReal::exact(Float::zero(), prec);
        for (j, c) in rec.coeffs().iter().enumerate().skip(1).take_while(|(j, _)| *j <= n) {
            acc = acc.add(&v[n - j].scale(&(-c.eval_int(n as i64) / &lead)));
        }
        v.push(acc);
    }
    v
}

fn d_recurrence(m: u32, r: i64) -> Result<Recurrence, PipelineError> {
    let t = symmetric_power(BaseEquation::BesselK, m as i64)?;
    Ok(operator_to_recurrence(&gamma_rescale_ode(&t, &rat(r, 1))?))
}

fn unit(len: usize, i: usize) -> Vec<Rational> {
    (0..len).map(|j| if i == j { rat(1, 1) } else { rat(0, 1) }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremD4Report {
    pub prec: u32,
    pub zeta3: BigReal,
    /// The recurrence for `d_n = 16ⁿ/n!²·c_{4,2n+1}`.
    pub recurrence: Recurrence,
    /// `A_n`, `B_n` with initial values `(1, 4)` and `(0, 1)`.
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub rows: Vec<IdentityRow>,
}

impl Verdict for TheoremD4Report {
    fn verdict(&self) -> Result<(), PipelineError> {
        self.rows.iter().try_for_each(IdentityRow::check)
    }

    fn to_text(&self) -> String {
        let mut out = format!("zeta(3) = {}\nrecurrence: {}\n", self.zeta3, self.recurrence.to_forward_string("n"));
        out += &format!("A_n: {}\nB_n: {}\n", self.a.join(", "), self.b.join(", "));
        self.rows.iter().for_each(|r| out += &r.text());
        out
    }
}

/// `d_n = 7/8·A_n·ζ(3) − 3·B_n` for `n ≤ n_max`, compared three ways:
/// quadrature moments (for `n ≤ 8`), the recurrence run on `d_0`, `d_1`, and
/// the exact combination of the integer solutions.
pub fn theorem_d4_check(n_max: usize, prec: u32) -> Result<TheoremD4Report, PipelineError> {
    theorem_d4_with(&MomentIntegrator::new(prec, QuadratureSpec::default()), n_max)
}

/// [`theorem_d4_check`] on a shared integrator.
pub fn theorem_d4_with(integrator: &MomentIntegrator, n_max: usize) -> Result<TheoremD4Report, PipelineError> {
    let prec = integrator.prec();
    if n_max < 2 {
        return Err(PipelineError::InvalidArgument(format!("need N >= 2, got {n_max}")));
    }
    let digits = prec.saturating_sub(5);
    let zeta = zeta3(prec + 10);
    let rec = d_recurrence(4, 4)?;
    let a = solve_series(&rec, &[rat(1, 1), rat(4, 1)], n_max)?.values;
    let b = solve_series(&rec, &[rat(0, 1), rat(1, 1)], n_max)?.values;
    let combo = |n: usize| {
        zeta.scale(&(rat(7, 8) * &a[n])).sub(&BigReal::from_rational(&(rat(3, 1) * &b[n]), prec + 10))
    };
    let d0 = zeta.scale(&rat(7, 8));
    let d1 = zeta.scale(&rat(7, 2)).sub(&BigReal::from_rational(&rat(3, 1), prec + 10));
    let run = solve_real(&rec, &[d0, d1], n_max);

    let mut rows = vec![
        IdentityRow::new("c_{4,1} = 7/8 zeta(3)", integrator.moment(4, 1)?, zeta.scale(&rat(7, 8)), digits),
        IdentityRow::new(
            "c_{4,3} = 7/32 zeta(3) - 3/16",
            integrator.moment(4, 3)?,
            zeta.scale(&rat(7, 32)).sub(&BigReal::from_rational(&rat(3, 16), prec + 10)),
            digits,
        ),
    ];
    for n in 0..=n_max.min(8) {
        rows.push(IdentityRow::new(
            format!("d_{n}: quadrature vs 7/8 A_n zeta(3) - 3 B_n"),
            quadrature_d(integrator, 4, 4, n)?,
            combo(n),
            digits,
        ));
    }
    for (n, d) in run.iter().enumerate().take(n_max + 1).skip(2) {
        rows.push(IdentityRow::new(format!("d_{n}: recurrence from d_0, d_1 vs combination"), d.clone(), combo(n), digits));
    }
    Ok(TheoremD4Report {
        prec,
        zeta3: zeta,
        recurrence: rec,
        a: a.iter().map(ToString::to_string).collect(),
        b: b.iter().map(ToString::to_string).collect(),
        rows,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub prec: u32,
    /// `c_{5,1}`, `c_{5,3}`, `c_{6,1}`, `c_{6,3}`.
    pub s5: BigReal,
    pub t5: BigReal,
    pub s6: BigReal,
    pub t6: BigReal,
    pub rows: Vec<IdentityRow>,
}

impl Verdict for ConstantsReport {
    fn verdict(&self) -> Result<(), PipelineError> {
        self.rows.iter().try_for_each(IdentityRow::check)
    }

    fn to_text(&self) -> String {
        let mut out = format!("s = c_{{5,1}} = {}\nt = c_{{5,3}} = {}\n", self.s5, self.t5);
        out += &format!("s' = c_{{6,1}} = {}\nt' = c_{{6,3}} = {}\n", self.s6, self.t6);
        self.rows.iter().for_each(|r| out += &r.text());
        out
    }
}

/// `α + β·s + γ·t` with rational coefficients.
fn affine(k: [Rational; 3], s: &BigReal, t: &BigReal, prec: u32) -> BigReal {
    BigReal::from_rational(&k[0], prec).add(&s.scale(&k[1])).add(&t.scale(&k[2]))
}

/// The relations for `c_{5,5}` and `c_{6,5}` in terms of the first two odd
/// moments, and the solution-basis expressions for `d_n` with `m = 5, 6`.
pub fn constants_5_6_check(prec: u32) -> Result<ConstantsReport, PipelineError> {
    constants_5_6_with(&MomentIntegrator::new(prec, QuadratureSpec::default()))
}

/// [`constants_5_6_check`] on a shared integrator.
pub fn constants_5_6_with(integrator: &MomentIntegrator) -> Result<ConstantsReport, PipelineError> {
    let prec = integrator.prec();
    if prec < 30 {
        return Err(PipelineError::InvalidArgument(format!("need prec >= 30, got {prec}")));
    }
    let digits = prec - 8;
    let p = prec + 10;
    let (s5, t5) = (integrator.moment(5, 1)?, integrator.moment(5, 3)?);
    let (s6, t6) = (integrator.moment(6, 1)?, integrator.moment(6, 3)?);
    let mut rows = vec![
        IdentityRow::new(
            "c_{5,5} = 8/15 - 16/45 s + 76/15 t",
            integrator.moment(5, 5)?,
            affine([rat(8, 15), rat(-16, 45), rat(76, 15)], &s5, &t5, p),
            digits,
        ),
        IdentityRow::new(
            "c_{6,5} = 5/48 - 1/36 s + 85/72 t",
            integrator.moment(6, 5)?,
            affine([rat(5, 48), rat(-1, 36), rat(85, 72)], &s6, &t6, p),
            digits,
        ),
    ];
    // d_n = A_n s + w·B_n t + C_n (α + β s + γ t)
    let bases: [(u32, i64, i64, [Rational; 3]); 2] = [
        (5, 15, 225, [rat(6750, 1), rat(-4500, 1), rat(64125, 1)]),
        (6, 48, 2304, [rat(138240, 1), rat(-36864, 1), rat(1566720, 1)]),
    ];
    for (m, r, w, third) in bases {
        let (s, t) = if m == 5 { (&s5, &t5) } else { (&s6, &t6) };
        let rec = d_recurrence(m, r)?;
        let sol: Vec<Vec<Rational>> =
            (0..3).map(|i| solve_series(&rec, &unit(3, i), 6).map(|t| t.values)).collect::<Result<_, _>>()?;
        let last = affine(third.clone(), s, t, p);
        let (a, b, c) = (&sol[0], &sol[1], &sol[2]);
        for (n, ((an, bn), cn)) in a.iter().zip(b).zip(c).enumerate() {
            let combo = s.scale(an).add(&t.scale(&(rat(w, 1) * bn))).add(&last.scale(cn));
            let label = format!("m={m} d_{n}: quadrature vs A_n s + {w} B_n t + C_n ({} {:+} s {:+} t)", third[0], third[1], third[2]);
            rows.push(IdentityRow::relative(label, quadrature_d(integrator, m, r, n)?, combo, digits));
        }
    }
    Ok(ConstantsReport { prec, s5, t5, s6, t6, rows })
}

/// The even-moment recurrence on quadrature values.
#[derive(Debug, Clone, Serialize)]
pub struct FanNumeric {
    pub prec: u32,
    /// `c_{m,0}, c_{m,2}, …`
    pub moments: Vec<BigReal>,
    /// Relative residual `|Σ c_i(2n)·c_{m,2n−2i}| / Σ |…|` for each usable `n`.
    pub residuals: Vec<String>,
    pub max_residual: String,
    pub digits: u32,
    pub pass: bool,
}

impl FanNumeric {
    pub(crate) fn verdict(&self) -> Result<(), PipelineError> {
        if self.pass {
            Ok(())
        } else {
            Err(PipelineError::ToleranceExceeded {
                what: "even-moment recurrence on quadrature values".into(),
                residual: self.max_residual.clone(),
            })
        }
    }

    pub(crate) fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.moments.iter().enumerate() {
            out += &format!("  c_{{m,{}}} = {}\n", 2 * i, c);
        }
        out += &format!("  even-moment recurrence residuals: [{}] (need < 1e-{})\n", self.residuals.join(", "), self.digits);
        out
    }
}

/// Evaluates the even sublattice of the moment recurrence on `c_{m,0}`,
/// `c_{m,2}`, … (at least through `c_{m,4}`).
pub fn fan_numeric_check(m: u32, prec: u32) -> Result<FanNumeric, PipelineError> {
    fan_numeric_with(&MomentIntegrator::new(prec, QuadratureSpec::default()), m)
}

/// [`fan_numeric_check`] on a shared integrator.
pub fn fan_numeric_with(integrator: &MomentIntegrator, m: u32) -> Result<FanNumeric, PipelineError> {
    let prec = integrator.prec();
    check_range(m, 1, 8)?;
    let t = symmetric_power(BaseEquation::BesselK, m as i64)?;
    let rec = moment_recurrence(&t)?.sublattice(0)?;
    let span = rec.order();
    let top = span.max(2);
    let moments = (0..=top).map(|n| integrator.moment(m, 2 * n as u32)).collect::<Result<Vec<_>, _>>()?;
    let bits = bits_for(prec);
    let mut worst = Float::zero();
    let mut residuals = Vec::new();
    for n in span..=top {
        let mut signed = Float::zero();
        let mut total = Float::zero();
        for (i, c) in rec.coeffs().iter().enumerate() {
            let term = Float::from_rational(&c.eval_int(n as i64), bits).mul(moments[n - i].value(), bits);
            signed = signed.add(&term, bits);
            total = total.add(&term.abs(), bits);
        }
        let rel = if total.is_zero() { Float::zero() } else { signed.div(&total, 64).abs() };
        residuals.push(rel.to_decimal(3));
        worst = Float::max_abs(&worst, &rel);
    }
    let digits = prec.saturating_sub(10);
    let pass = worst.cmp_abs(&ten_pow_neg(digits, bits)).is_lt();
    Ok(FanNumeric { prec, moments, residuals, max_residual: worst.to_decimal(3), digits, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_recurrence_matches_exact() {
        let rec = d_recurrence(4, 4).unwrap();
        let exact = solve_series(&rec, &[rat(1, 1), rat(4, 1)], 6).unwrap().values;
        let one = BigReal::from_rational(&rat(1, 1), 30);
        let four = BigReal::from_rational(&rat(4, 1), 30);
        let run = solve_real(&rec, &[one, four], 6);
        for n in 0..=6 {
            assert!(run[n].agrees_with(&BigReal::from_rational(&exact[n], 30), 25));
        }
        assert_eq!(exact[2], rat(28, 1));
    }

    #[test]
    fn identity_rows() {
        let a = BigReal::from_rational(&rat(1, 3), 30);
        let b = BigReal::from_rational(&rat(1, 3), 30).add(&BigReal::from_rational(&rat(1, 100000), 30));
        assert!(!IdentityRow::new("x", a.clone(), b, 10).pass);
        assert!(IdentityRow::new("x", a.clone(), a, 10).pass);
    }
}

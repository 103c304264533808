use num_traits::Zero;
use serde::Serialize;

use super::numeric::{fan_numeric_with, FanNumeric};
use super::{check_range, PipelineError, Verdict};
use crate::annihilator::{m_plus, symmetric_power, BaseEquation};
use crate::numerics::{MomentIntegrator, QuadratureSpec};
use crate::sequences::{
    factorial_square_rescale, gamma_rescale_ode, moment_recurrence, moment_sublattice_ode, verrill_coefficients,
    Recurrence,
};
use crate::theta::ThetaOperator;
use crate::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageMatch {
    pub stage: String,
    pub matches: bool,
}

/// Every artifact of the chain `T_m → moment recurrence → d-ODE → infinity`,
/// next to the rescaled `S_m`.
#[derive(Debug, Clone, Serialize)]
pub struct DerivationReport {
    pub m: u32,
    pub t_m: ThetaOperator,
    pub moment_rec: Recurrence,
    pub d_ode: ThetaOperator,
    pub mirror_ode: ThetaOperator,
    pub verrill_ode: ThetaOperator,
    /// Comparisons in pipeline order.
    pub matches: Vec<StageMatch>,
    /// `r` in `d_n = r^{2n}/n!²·c_{m,2n+1}`.
    pub scale_used: String,
    /// `c` in the map to infinity.
    pub mirror_scale: String,
    /// Order to which the series `Σ A_n x^n` was tested.
    pub series_order: usize,
}

impl DerivationReport {
    pub fn first_mismatch(&self) -> Option<&str> {
        self.matches.iter().find(|s| !s.matches).map(|s| s.stage.as_str())
    }
}

impl Verdict for DerivationReport {
    fn verdict(&self) -> Result<(), PipelineError> {
        match self.first_mismatch() {
            Some(stage) => Err(PipelineError::StageMismatch { m: self.m, stage: stage.to_string() }),
            None => Ok(()),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("m = {}  (r = {}, c = {})\n", self.m, self.scale_used, self.mirror_scale);
        out += &format!("T_m:        {}\n", self.t_m.to_grouped_string());
        out += &format!("moments:    {}\n", self.moment_rec.to_forward_string("k"));
        out += &format!("d-ODE:      {}\n", self.d_ode.to_grouped_string());
        out += &format!("at infinity: {}\n", self.mirror_ode.to_grouped_string());
        out += &format!("rescaled S_m: {}\n", self.verrill_ode.to_grouped_string());
        for s in &self.matches {
            out += &format!("  {:<40} {}\n", s.stage, if s.matches { "yes" } else { "NO" });
        }
        out
    }
}

fn first_nonzero(v: &[Rational]) -> Option<usize> {
    v.iter().position(|c| !c.is_zero())
}

/// Runs the chain for `K₀^m` with gamma scale `r` and mirror scale `c`, and
/// compares against `factorial_square_rescale(S_m)` and the series
/// `Σ A_n^{(m)} xⁿ` through `order`.
pub fn derive_chain(m: u32, r: &Rational, c: &Rational, order: usize) -> Result<DerivationReport, PipelineError> {
    check_range(m, 1, 12)?;
    let t_m = symmetric_power(BaseEquation::BesselK, m as i64)?;
    let moment_rec = moment_recurrence(&t_m)?;
    let d_ode = gamma_rescale_ode(&t_m, r)?;
    let mirror_ode = d_ode.mirror_at_infinity(c)?;
    let verrill_ode = factorial_square_rescale(&symmetric_power(BaseEquation::SqrtExp, m as i64)?).normalize();

    let series = verrill_coefficients(m, order)?.values;
    let kills = |op: &ThetaOperator| first_nonzero(&op.apply_to_series(&series, order)).is_none();
    let matches = vec![
        StageMatch {
            stage: format!("operator at infinity has x-degree {} and order {}", m_plus(m), m - 1),
            matches: mirror_ode.x_degree() == Some(m_plus(m)) && mirror_ode.order() == Some(m as usize - 1),
        },
        StageMatch { stage: "operator at infinity equals rescaled S_m".into(), matches: mirror_ode == verrill_ode },
        StageMatch { stage: format!("operator at infinity kills sum A_n x^n to order {order}"), matches: kills(&mirror_ode) },
        StageMatch { stage: format!("rescaled S_m kills sum A_n x^n to order {order}"), matches: kills(&verrill_ode) },
    ];
    Ok(DerivationReport {
        m,
        t_m,
        moment_rec,
        d_ode,
        mirror_ode,
        verrill_ode,
        matches,
        scale_used: r.to_string(),
        mirror_scale: c.to_string(),
        series_order: order,
    })
}

/// The chain with `r = 1/2`, `c = 1`, where the operator at infinity must
/// coincide with the rescaled `S_m` exactly.
pub fn main_theorem_check(m: u32, order: usize) -> Result<DerivationReport, PipelineError> {
    check_range(m, 3, 8)?;
    let report = derive_chain(m, &rat(1, 2), &rat(1, 1), order)?;
    report.verdict()?;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct FanReport {
    pub m: u32,
    pub order: usize,
    /// Annihilator of `Σ c_{m,2n} x^{2n}`.
    pub even_ode: ThetaOperator,
    /// The same equation moved to infinity; it should kill `I₀(x)^m`.
    pub infinity_ode: ThetaOperator,
    pub annihilated: bool,
    pub first_failure: Option<usize>,
    /// `infinity_ode` coincides with `T_m` itself.
    pub equals_t_m: bool,
    pub numeric: Option<FanNumeric>,
}

impl Verdict for FanReport {
    fn verdict(&self) -> Result<(), PipelineError> {
        if let Some(order) = self.first_failure {
            return Err(PipelineError::SeriesNotAnnihilated { m: self.m, order });
        }
        match &self.numeric {
            Some(n) => n.verdict(),
            None => Ok(()),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("m = {}\n", self.m);
        out += &format!("even-moment ODE:  {}\n", self.even_ode.to_grouped_string());
        out += &format!("at infinity:      {}\n", self.infinity_ode.to_grouped_string());
        out += &format!(
            "kills x^-1 I0(1/x)^m to order {}: {}\n",
            self.order,
            match self.first_failure {
                None => "yes".to_string(),
                Some(k) => format!("no (first failure at x^{k})"),
            }
        );
        out += &format!("equals T_m: {}\n", if self.equals_t_m { "yes" } else { "no" });
        if let Some(n) = &self.numeric {
            out += &n.to_text();
        }
        out
    }
}

/// Coefficients of `I₀(x)^m = Σ a_n (x/2)^{2n}` through `x^order`.
fn i0_power_series(m: u32, order: usize) -> Vec<Rational> {
    let a = crate::sequences::convolution_series(m, order / 2 + 1);
    let mut out = vec![Rational::zero(); order + 1];
    let mut four = Rational::from_integer(1.into());
    for (n, an) in a.iter().enumerate() {
        if 2 * n > order {
            break;
        }
        out[2 * n] = an / &four;
        four *= Rational::from_integer(4.into());
    }
    out
}

/// The Bessel-fan identity: the ODE of `Σ c_{m,2n} x^{2n}` also has the
/// solution `x^{-1} I₀(1/x)^m`, checked as a series at infinity through
/// `order`. With `prec` set, the even-moment recurrence is also tested on
/// quadrature values.
pub fn bessel_fan_check(m: u32, order: usize, prec: Option<u32>) -> Result<FanReport, PipelineError> {
    let integrator = prec.map(|p| MomentIntegrator::new(p, QuadratureSpec::default()));
    bessel_fan_with(m, order, integrator.as_ref())
}

/// [`bessel_fan_check`] with the numeric part run on a shared integrator.
pub fn bessel_fan_with(
    m: u32,
    order: usize,
    integrator: Option<&MomentIntegrator>,
) -> Result<FanReport, PipelineError> {
    check_range(m, 1, 12)?;
    let t_m = symmetric_power(BaseEquation::BesselK, m as i64)?;
    let even_ode = moment_sublattice_ode(&t_m, 0)?.substitute_x_power(2).normalize();
    let infinity_ode = even_ode.mirror_at_infinity(&rat(1, 1))?;
    let series = i0_power_series(m, order);
    let first_failure = first_nonzero(&infinity_ode.apply_to_series(&series, order + 1));
    let numeric = integrator.map(|i| fan_numeric_with(i, m)).transpose()?;
    Ok(FanReport {
        m,
        order,
        equals_t_m: infinity_ode == t_m,
        even_ode,
        infinity_ode,
        annihilated: first_failure.is_none(),
        first_failure,
        numeric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn main_theorem_small_m() {
        for m in 3..=5 {
            let r = main_theorem_check(m, 15).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn wrong_scale_is_caught() {
        let r = derive_chain(4, &rat(1, 1), &rat(1, 1), 10).unwrap();
        assert_eq!(r.first_mismatch(), Some("operator at infinity equals rescaled S_m"));
        assert!(matches!(r.verdict(), Err(PipelineError::StageMismatch { m: 4, .. })));
    }

    #[test]
    fn range_is_enforced() {
        assert!(matches!(main_theorem_check(2, 10), Err(PipelineError::InvalidDegree { .. })));
        assert!(matches!(main_theorem_check(9, 10), Err(PipelineError::InvalidDegree { .. })));
    }

    #[test]
    fn fan_series_small_m() {
        for m in 1..=4 {
            let f = bessel_fan_check(m, 24, None).unwrap();
            assert!(f.annihilated, "{}", f.to_text());
        }
    }

    #[test]
    fn i0_series_m1() {
        // I₀(x) = 1 + x²/4 + x⁴/64 + …
        let s = i0_power_series(1, 4);
        assert_eq!(s, vec![rat(1, 1), rat(0, 1), rat(1, 4), rat(0, 1), rat(1, 64)]);
    }
}

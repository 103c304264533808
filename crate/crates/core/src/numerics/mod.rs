//! High-precision numerics: `K₀`, Bessel moments and `ζ(3)`.

pub mod float;
mod k0;
mod moments;
mod real;
mod zeta;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use float::{pi, Float};
pub use moments::MomentIntegrator;
pub use real::{bits_for, ten_pow_neg, BigReal};
pub use zeta::zeta3;

use crate::annihilator::{symmetric_power, BaseEquation};
use crate::sequences::moment_recurrence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    #[error("quadrature did not reach the requested precision by level {level} (last change {estimate})")]
    PrecisionNotReached { level: u32, estimate: String },
    #[error("argument must be positive")]
    NonPositiveArgument,
    #[error("moment c_{{{m},{k}}} is not available")]
    InvalidMoment { m: u32, k: u32 },
}

/// Double-exponential quadrature settings. Level `L` means step `2^-L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Refinement stops with an error past this level.
    pub max_level: u32,
    /// Evaluate at exactly this level instead of refining.
    pub fixed_level: Option<u32>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { max_level: 12, fixed_level: None }
    }
}

impl QuadratureSpec {
    pub fn at_level(level: u32) -> Self {
        QuadratureSpec { max_level: level.max(12), fixed_level: Some(level) }
    }
}

/// `K₀(x)` from its cosh integral, error bound from successive levels.
#[allow(non_snake_case)]
pub fn bessel_K0(x: &BigReal, prec: u32) -> Result<BigReal, NumericsError> {
    bessel_k0_with(x, prec, &QuadratureSpec::default())
}

pub fn bessel_k0_with(x: &BigReal, prec: u32, spec: &QuadratureSpec) -> Result<BigReal, NumericsError> {
    let cache = k0::CoshCache::default();
    let (v, err, _) = k0::bessel_k0_float(&cache, x.value(), prec, spec)?;
    Ok(BigReal::new(v.round(bits_for(prec)), err, prec))
}

/// `c_{m,k} = ∫₀^∞ x^k K₀(x)^m dx`.
pub fn bessel_moment(m: u32, k: u32, prec: u32) -> Result<BigReal, NumericsError> {
    MomentIntegrator::new(prec, QuadratureSpec::default()).moment(m, k)
}

/// One row of [`verify_moment_recurrence`].
#[derive(Debug, Clone, Serialize)]
pub struct MomentResidual {
    pub k: u32,
    /// `|Σ c_i(k)·c_{m,k−2i}| / Σ |c_i(k)·c_{m,k−2i}|`
    pub relative: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentRecurrenceReport {
    pub m: u32,
    pub recurrence: String,
    pub rows: Vec<MomentResidual>,
    pub max_relative: f64,
}

/// Evaluates the step-2 moment recurrence of `K₀^m` on quadrature moments
/// `c_{m,0..=k_max}` at every `k` the window allows.
pub fn verify_moment_recurrence(
    integrator: &MomentIntegrator,
    m: u32,
    k_max: u32,
) -> Result<MomentRecurrenceReport, NumericsError> {
    let t = symmetric_power(BaseEquation::BesselK, m as i64).map_err(|_| NumericsError::InvalidMoment { m, k: 0 })?;
    let rec = moment_recurrence(&t).expect("K0 powers are even");
    let span = rec.order() as u32 * 2;
    let moments = (0..=k_max).map(|k| integrator.moment(m, k)).collect::<Result<Vec<_>, _>>()?;
    let bits = bits_for(integrator.prec());
    let mut rows = Vec::new();
    for top in span..=k_max {
        let mut signed = Float::zero();
        let mut total = Float::zero();
        for (i, c) in rec.coeffs().iter().enumerate() {
            let coeff = Float::from_rational(&c.eval_int(top as i64), bits);
            let term = coeff.mul(moments[(top - 2 * i as u32) as usize].value(), bits);
            signed = signed.add(&term, bits);
            total = total.add(&term.abs(), bits);
        }
        rows.push(MomentResidual { k: top - span, relative: signed.div(&total, 64).abs().to_f64() });
    }
    let max_relative = rows.iter().map(|r| r.relative).fold(0.0, f64::max);
    Ok(MomentRecurrenceReport { m, recurrence: rec.to_forward_string("k"), rows, max_relative })
}

//! `K₀(x) = ∫₀^∞ e^{−x·cosh t} dt` by the trapezoid rule.
//!
//! The integrand is even in `t`, analytic in the strip `|Im t| < π/2` and
//! decays doubly exponentially, so the plain trapezoid rule on a uniform grid
//! converges exponentially in `1/h`. Grids are dyadic (`h = 2^-level`), which
//! makes consecutive levels nested.

use std::collections::HashMap;
use std::sync::Mutex;

use super::{Float, NumericsError, QuadratureSpec};

/// `cosh(i·2^-level)` for `i = 0, 1, …`, extended on demand.
#[derive(Debug)]
pub(crate) struct CoshGrid {
    bits: u64,
    e_pos: Float,
    e_neg: Float,
    step_pos: Float,
    step_neg: Float,
    values: Vec<Float>,
}

impl CoshGrid {
    fn new(level: u32, bits: u64) -> Self {
        let work = bits + 32;
        let h = Float::from_parts(1.into(), -(level as i64));
        let step_pos = h.exp(work);
        let step_neg = Float::one().div(&step_pos, work);
        CoshGrid { bits, e_pos: Float::one(), e_neg: Float::one(), step_pos, step_neg, values: Vec::new() }
    }

    fn get(&mut self, i: usize) {
        let work = self.bits + 32;
        while self.values.len() <= i {
            if !self.values.is_empty() {
                self.e_pos = self.e_pos.mul(&self.step_pos, work);
                self.e_neg = self.e_neg.mul(&self.step_neg, work);
            }
            let c = self.e_pos.add(&self.e_neg, work).mul_pow2(-1).round(self.bits);
            self.values.push(c);
        }
    }
}

type SharedGrid = std::sync::Arc<Mutex<CoshGrid>>;

/// Shared cosh grids keyed by `(level, bits)`.
#[derive(Debug, Default)]
pub(crate) struct CoshCache {
    grids: Mutex<HashMap<(u32, u64), SharedGrid>>,
}

impl CoshCache {
    fn grid(&self, level: u32, bits: u64) -> SharedGrid {
        let mut g = self.grids.lock().unwrap_or_else(|e| e.into_inner());
        g.entry((level, bits)).or_insert_with(|| std::sync::Arc::new(Mutex::new(CoshGrid::new(level, bits)))).clone()
    }
}

/// Natural-log budget `D` for a relative accuracy of `10^-digits`.
pub(crate) fn log_budget(digits: u32) -> f64 {
    digits as f64 * std::f64::consts::LN_10
}

/// The dyadic level whose trapezoid error at `x` is below `e^-budget`
/// (relative to `K₀(x)`).
pub(crate) fn inner_level(x: f64, budget: f64) -> u32 {
    let d = budget + 5.0;
    let mut h = 2.0 * std::f64::consts::PI * (std::f64::consts::FRAC_PI_2 - 0.1) / d;
    if x > 0.0 {
        h = h.min(std::f64::consts::PI / (x * d / 2.0).sqrt());
    }
    (-(h.log2())).ceil().max(0.0) as u32
}

/// Trapezoid sum `h·(f(0)/2 + Σ_{i≥1} f(i·h))` at one level, truncated once
/// `x(cosh t − 1)` exceeds the budget.
pub(crate) fn k0_at_level(cache: &CoshCache, x: &Float, level: u32, budget: f64, bits: u64) -> Float {
    let xf = x.to_f64();
    let h = (level as f64).exp2().recip();
    // cosh(t) − 1 = 2 sinh²(t/2), stable for small t
    let count = (1..).take_while(|&i| xf * 2.0 * (i as f64 * h / 2.0).sinh().powi(2) <= budget + 2.0).count();
    let cosh: Vec<Float> = {
        let grid = cache.grid(level, bits);
        let mut grid = grid.lock().unwrap_or_else(|e| e.into_inner());
        grid.get(count);
        grid.values[1..=count].to_vec()
    };
    let mut sum = x.neg().exp(bits).mul_pow2(-1);
    for c in &cosh {
        sum = sum.add(&x.mul(c, bits).neg().exp(bits), bits);
    }
    sum.mul_pow2(-(level as i64))
}

/// `K₀(x)` to about `digits` correct digits relative, at the level picked by
/// [`inner_level`]. No error estimate; used for quadrature nodes.
pub(crate) fn k0_fixed(cache: &CoshCache, x: &Float, digits: u32, bits: u64) -> Float {
    let budget = log_budget(digits);
    k0_at_level(cache, x, inner_level(x.to_f64(), budget), budget, bits)
}

/// `K₀(x)` with a successive-level error estimate.
pub(crate) fn bessel_k0_float(
    cache: &CoshCache,
    x: &Float,
    prec: u32,
    spec: &QuadratureSpec,
) -> Result<(Float, Float, u32), NumericsError> {
    if x.signum() <= 0 {
        return Err(NumericsError::NonPositiveArgument);
    }
    let bits = super::bits_for(prec);
    let budget = log_budget(prec + 12);
    let target = super::ten_pow_neg(prec, bits);
    let start = spec.fixed_level.unwrap_or_else(|| inner_level(x.to_f64(), log_budget(prec / 2 + 1)).min(spec.max_level));
    let mut prev = k0_at_level(cache, x, start.saturating_sub(1), budget, bits);
    let mut level = start;
    loop {
        let cur = k0_at_level(cache, x, level, budget, bits);
        let err = cur.sub(&prev, bits).abs();
        if spec.fixed_level.is_some() || err.cmp_abs(&cur.mul(&target, 64)).is_le() {
            return Ok((cur, err, level));
        }
        if level >= spec.max_level {
            return Err(NumericsError::PrecisionNotReached { level, estimate: err.to_decimal(3) });
        }
        prev = cur;
        level += 1;
    }
}

//! `c_{m,k} = ∫₀^∞ x^k K₀(x)^m dx` by exp-sinh quadrature.
//!
//! With `x = exp(π/2·sinh s)` the integrand decays doubly exponentially at
//! both ends. Nodes sit on dyadic grids `s = i·2^-level`; a node's `x`,
//! Jacobian and `K₀(x)` do not depend on `(m, k)` and are cached, so a whole
//! family of moments costs little more than one.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::k0::{k0_fixed, CoshCache};
use super::{bits_for, float::pi, ten_pow_neg, BigReal, Float, NumericsError, QuadratureSpec};

#[derive(Clone, Debug)]
struct Node {
    x: Float,
    /// `dx/ds = x·π/2·cosh s`
    jac: Float,
    k0: Float,
}

/// Quadrature engine for Bessel moments at one working precision.
#[derive(Debug)]
pub struct MomentIntegrator {
    prec: u32,
    bits: u64,
    spec: QuadratureSpec,
    half_pi: Float,
    cosh: Arc<CoshCache>,
    nodes: Mutex<HashMap<(i64, u32), Arc<Node>>>,
}

/// Reduce `i·2^-level` to lowest terms so nested levels share keys.
fn node_key(mut i: i64, mut level: u32) -> (i64, u32) {
    while level > 0 && i % 2 == 0 {
        i /= 2;
        level -= 1;
    }
    (i, level)
}

/// Rough `ln K₀(e^u)`, good to a few percent; only used to place cutoffs.
fn ln_k0_estimate(u: f64) -> f64 {
    let x = u.exp();
    if u < -2.0 {
        (std::f64::consts::LN_2 - 0.577_215_664_901_532_9 - u).ln()
    } else if x > 2.0 {
        -x + 0.5 * (std::f64::consts::PI / (2.0 * x)).ln() + (1.0 - 1.0 / (8.0 * x)).ln()
    } else {
        let h = 0.02;
        let mut sum = 0.5 * (-x).exp();
        let mut t: f64 = h;
        loop {
            let term = (-x * t.cosh()).exp();
            sum += term;
            if term < 1e-18 {
                break;
            }
            t += h;
        }
        (sum * h).ln()
    }
}

/// `ln` of the transformed integrand at `s`.
fn ln_integrand(m: u32, k: u32, s: f64) -> f64 {
    let u = std::f64::consts::FRAC_PI_2 * s.sinh();
    (k as f64 + 1.0) * u + m as f64 * ln_k0_estimate(u) + (std::f64::consts::FRAC_PI_2 * s.cosh()).ln()
}

/// Integration range in `s` outside which the integrand is below `10^-digits`
/// relative to its peak.
fn s_range(m: u32, k: u32, digits: u32) -> (f64, f64) {
    let step = 1.0 / 32.0;
    let peak = (-160..=160).map(|i| ln_integrand(m, k, i as f64 * step)).fold(f64::NEG_INFINITY, f64::max);
    let floor = peak - (digits as f64 + 4.0) * std::f64::consts::LN_10;
    let mut lo = 0.0;
    while ln_integrand(m, k, lo) > floor || lo > -1.0 {
        lo -= step;
    }
    let mut hi = 0.0;
    while ln_integrand(m, k, hi) > floor || hi < 1.0 {
        hi += step;
    }
    (lo, hi)
}

impl MomentIntegrator {
    pub fn new(prec: u32, spec: QuadratureSpec) -> Self {
        let bits = bits_for(prec);
        MomentIntegrator {
            prec,
            bits,
            spec,
            half_pi: pi(bits + 16).mul_pow2(-1),
            cosh: Arc::new(CoshCache::default()),
            nodes: Mutex::new(HashMap::new()),
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn node(&self, i: i64, level: u32) -> Arc<Node> {
        let key = node_key(i, level);
        if let Some(n) = self.nodes.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return n.clone();
        }
        let bits = self.bits + 16;
        let s = Float::from_parts(key.0.into(), -(key.1 as i64));
        let es = s.exp(bits);
        let es_inv = Float::one().div(&es, bits);
        let sinh = es.sub(&es_inv, bits).mul_pow2(-1);
        let cosh = es.add(&es_inv, bits).mul_pow2(-1);
        let x = self.half_pi.mul(&sinh, bits).exp(bits);
        let jac = x.mul(&self.half_pi, bits).mul(&cosh, bits);
        let k0 = k0_fixed(&self.cosh, &x, self.prec + 12, bits);
        let node = Arc::new(Node { x, jac, k0 });
        self.nodes.lock().unwrap_or_else(|e| e.into_inner()).insert(key, node.clone());
        node
    }

    /// Evaluates the nodes `i` in `range` at `level`, in parallel when enabled.
    fn nodes_for(&self, range: std::ops::RangeInclusive<i64>, level: u32) -> Vec<Arc<Node>> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let idx: Vec<i64> = range.collect();
            idx.par_iter().map(|&i| self.node(i, level)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            range.map(|i| self.node(i, level)).collect()
        }
    }

    /// Trapezoid sum at one level over `[lo, hi]`, accumulated in order of
    /// increasing `|s|`.
    fn sum_level(&self, m: u32, k: u32, lo: f64, hi: f64, level: u32) -> Float {
        let bits = self.bits + 16;
        let scale = (level as f64).exp2();
        let i_lo = (lo * scale).floor() as i64;
        let i_hi = (hi * scale).ceil() as i64;
        let nodes = self.nodes_for(i_lo..=i_hi, level);
        let mut order: Vec<(i64, &Arc<Node>)> = (i_lo..=i_hi).zip(nodes.iter()).collect();
        order.sort_by_key(|(i, _)| (i.unsigned_abs(), *i < 0));
        let mut sum = Float::zero();
        for (_, n) in order {
            let term = n.x.powi(k, bits).mul(&n.k0.powi(m, bits), bits).mul(&n.jac, bits);
            sum = sum.add(&term, bits);
        }
        sum.mul_pow2(-(level as i64))
    }

    /// `c_{m,k}` with the difference of the last two levels as error bound.
    pub fn moment(&self, m: u32, k: u32) -> Result<BigReal, NumericsError> {
        self.moment_with_level(m, k).map(|(v, _)| v)
    }

    /// [`moment`](Self::moment) together with the level it stopped at.
    pub fn moment_with_level(&self, m: u32, k: u32) -> Result<(BigReal, u32), NumericsError> {
        if m == 0 {
            return Err(NumericsError::InvalidMoment { m, k });
        }
        let (lo, hi) = s_range(m, k, self.prec + 12);
        let target = ten_pow_neg(self.prec, self.bits);
        let first = self.spec.fixed_level.map(|l| l.max(1)).unwrap_or(3);
        let mut prev = self.sum_level(m, k, lo, hi, first - 1);
        let mut level = first;
        loop {
            let cur = self.sum_level(m, k, lo, hi, level);
            let err = cur.sub(&prev, self.bits).abs();
            let bound = if cur.cmp_abs(&Float::one()).is_lt() { cur.abs().mul(&target, 64) } else { target.clone() };
            if self.spec.fixed_level.is_some() || err.cmp_abs(&bound).is_le() {
                return Ok((BigReal::new(cur.round(self.bits), err, self.prec), level));
            }
            if level >= self.spec.max_level {
                return Err(NumericsError::PrecisionNotReached { level, estimate: err.to_decimal(3) });
            }
            prev = cur;
            level += 1;
        }
    }

    /// Number of cached quadrature nodes.
    pub fn cached_nodes(&self) -> usize {
        self.nodes.lock().unwrap_or_else(|e| e.into_inner()).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_reduce() {
        assert_eq!(node_key(4, 3), (1, 1));
        assert_eq!(node_key(0, 5), (0, 0));
        assert_eq!(node_key(-3, 2), (-3, 2));
    }

    #[test]
    fn range_is_sane() {
        let (lo, hi) = s_range(4, 1, 60);
        assert!(lo < -2.0 && hi > 1.0 && hi < 5.0 && lo > -8.0, "{lo} {hi}");
    }
}

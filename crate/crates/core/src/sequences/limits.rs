use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{solve_series, Recurrence, SequenceError, SequenceTable};
use crate::numerics::{bits_for, BigReal, Float};
use crate::Rational;

/// `B_N/A_N` for the two solutions with initial data `init_a`, `init_b`.
/// The error bound is the distance to the previous iterate.
pub fn apery_limit(
    r: &Recurrence,
    init_a: &[Rational],
    init_b: &[Rational],
    n: usize,
    prec: u32,
) -> Result<BigReal, SequenceError> {
    let a = solve_series(r, init_a, n)?;
    let b = solve_series(r, init_b, n)?;
    let ratio = |k: usize| -> Result<Rational, SequenceError> {
        if a.values[k].is_zero() {
            return Err(SequenceError::ZeroDenominator(k));
        }
        Ok(&b.values[k] / &a.values[k])
    };
    let last = ratio(n)?;
    let err = if n == 0 { Rational::zero() } else { (&last - ratio(n - 1)?).abs() };
    let bits = bits_for(prec);
    Ok(BigReal::new(Float::from_rational(&last, bits), Float::from_rational(&err, 64), prec))
}

/// `A_n ≈ C·n^b·λⁿ` fitted on a window.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticFit {
    pub lambda: BigReal,
    pub b: BigReal,
    pub c: BigReal,
    /// `|A_{n_hi}/(C·n^b·λⁿ) − 1|` at the top of the window.
    pub residual: f64,
}

const FIT_PREC: u32 = 40;
const NODES: usize = 8;

/// Polynomial extrapolation to `h = 0` through `(h_i, y_i)`.
fn neville(h: &[Float], y: &[Float], bits: u64) -> Float {
    let mut p: Vec<Float> = y.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (hi, hj) = (&h[i], &h[i + level]);
            // p_i = (h_j·p_i − h_i·p_{i+1}) / (h_j − h_i)
            let num = hj.mul(&p[i], bits).sub(&hi.mul(&p[i + 1], bits), bits);
            p[i] = num.div(&hj.sub(hi, bits), bits);
        }
    }
    p.swap_remove(0)
}

/// Extrapolated value and the change from dropping the lowest node.
fn extrapolate(h: &[Float], y: &[Float], bits: u64) -> (Float, Float) {
    let all = neville(h, y, bits);
    let fewer = neville(&h[1..], &y[1..], bits);
    let err = all.sub(&fewer, bits).abs();
    (all, err)
}

/// Estimates `λ`, `b` and `C` in `A_n ~ C·n^b·λⁿ` from the values on `n_lo..=n_hi`.
///
/// `λ` comes from extrapolating the ratios `A_n/A_{n−1}` in `1/n`, `b` from
/// the normalized log-ratios, and `C` from what is left of `ln A_n`.
pub fn asymptotic_fit(t: &SequenceTable, n_lo: usize, n_hi: usize) -> Result<AsymptoticFit, SequenceError> {
    if n_lo < 2 || n_hi < n_lo + 8 || n_hi >= t.len() {
        return Err(SequenceError::BadWindow { lo: n_lo, hi: n_hi, len: t.len() });
    }
    if let Some(n) = (n_lo - 1..=n_hi).find(|&n| !t.values[n].is_positive()) {
        return Err(SequenceError::NonPositiveValues(n));
    }
    let bits = bits_for(FIT_PREC) + 64;
    let nodes: Vec<usize> = (0..NODES).map(|i| n_lo + (i * (n_hi - n_lo) + (NODES - 1) / 2) / (NODES - 1)).collect();
    let h: Vec<Float> = nodes.iter().map(|&n| Float::one().div_int(n as i64, bits)).collect();
    let ln_val = |n: usize| Float::from_rational(&t.values[n], bits).ln(bits);
    let ln_n = |n: usize| Float::from_int(n as i64).ln(bits);

    let rho: Vec<Float> = nodes.iter().map(|&n| Float::from_rational(&(&t.values[n] / &t.values[n - 1]), bits)).collect();
    let (lambda, lambda_err) = extrapolate(&h, &rho, bits);
    let ln_lambda = lambda.ln(bits);

    let beta: Vec<Float> = nodes
        .iter()
        .zip(&rho)
        .map(|(&n, r)| {
            let step = ln_n(n).sub(&ln_n(n - 1), bits);
            r.ln(bits).sub(&ln_lambda, bits).div(&step, bits)
        })
        .collect();
    let (b, b_err) = extrapolate(&h, &beta, bits);

    let gamma: Vec<Float> = nodes
        .iter()
        .map(|&n| {
            ln_val(n)
                .sub(&ln_lambda.mul_int(n as i64, bits), bits)
                .sub(&b.mul(&ln_n(n), bits), bits)
        })
        .collect();
    let (ln_c, ln_c_err) = extrapolate(&h, &gamma, bits);
    let c = ln_c.exp(bits);
    let c_err = c.mul(&ln_c_err, 64);

    let model = ln_c
        .add(&b.mul(&ln_n(n_hi), bits), bits)
        .add(&ln_lambda.mul_int(n_hi as i64, bits), bits);
    let residual = ln_val(n_hi).sub(&model, bits).exp(bits).sub(&Float::one(), bits).abs().to_f64();

    Ok(AsymptoticFit {
        lambda: BigReal::new(lambda, lambda_err, FIT_PREC),
        b: BigReal::new(b, b_err, FIT_PREC),
        c: BigReal::new(c, c_err, FIT_PREC),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::Provenance;
    use num_bigint::BigInt;

    #[test]
    fn geometric_sequence() {
        let values = (0..40).map(|n| Rational::from_integer(BigInt::from(5).pow(n))).collect();
        let fit = asymptotic_fit(&SequenceTable::new(values, Provenance::ClosedForm), 10, 30).unwrap();
        assert!((fit.lambda.to_f64() - 5.0).abs() < 1e-20);
        assert!(fit.b.to_f64().abs() < 1e-20);
        assert!((fit.c.to_f64() - 1.0).abs() < 1e-20);
        assert!(fit.residual < 1e-20);
    }

    #[test]
    fn window_checks() {
        let t = SequenceTable::new(vec![Rational::from_integer(1.into()); 20], Provenance::ClosedForm);
        assert!(matches!(asymptotic_fit(&t, 5, 10), Err(SequenceError::BadWindow { .. })));
        let mut v = t.values.clone();
        v[7] = Rational::zero();
        let t = SequenceTable::new(v, Provenance::ClosedForm);
        assert_eq!(asymptotic_fit(&t, 5, 15).unwrap_err(), SequenceError::NonPositiveValues(7));
    }
}

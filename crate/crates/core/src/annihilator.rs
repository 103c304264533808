//! Symmetric powers of `θ² − g` by the two-term ladder
//!
//! ```text
//! L_0 = 1,  L_1 = θ,  L_{k+1} = θ·L_k − k(m−k+1)·g·L_{k−1}   (k = 1..m)
//! ```
//!
//! `L_{m+1}` annihilates `y^m` whenever `θ²y = g·y`. With `g = x²` this is the
//! equation of `K₀(x)^m` (and `I₀(x)^m`); with `g = x` it is the equation of
//! `(Σ xⁿ/n!²)^m`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::theta::ThetaOperator;
use crate::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnihilatorError {
    #[error("symmetric power needs m >= 1, got {0}")]
    InvalidPower(i64),
    #[error("ladder index {k} exceeds m+1 = {limit}")]
    IndexOutOfRange { k: u32, limit: u32 },
}

/// The order-two base equation `θ² − g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseEquation {
    /// `θ² − x²`, satisfied by `K₀(x)` and `I₀(x)`.
    BesselK,
    /// `θ² − x`, satisfied by `Σ xⁿ/n!²`.
    SqrtExp,
}

impl BaseEquation {
    /// The x-power `g` on the right-hand side.
    pub fn g_power(self) -> u32 {
        match self {
            BaseEquation::BesselK => 2,
            BaseEquation::SqrtExp => 1,
        }
    }

    pub fn operator(self) -> ThetaOperator {
        ThetaOperator::theta().compose(&ThetaOperator::theta()).sub(&ThetaOperator::x_pow(self.g_power()))
    }
}

/// Two consecutive ladder operators for a fixed `m`.
#[derive(Debug, Clone)]
pub struct LadderState {
    pub m: u32,
    pub k: u32,
    pub prev: ThetaOperator,
    pub cur: ThetaOperator,
    g_power: u32,
}

impl LadderState {
    /// State at `k = 1`: `L_0 = 1`, `L_1 = θ`.
    pub fn new(base: BaseEquation, m: u32) -> Self {
        LadderState {
            m,
            k: 1,
            prev: ThetaOperator::one(),
            cur: ThetaOperator::theta(),
            g_power: base.g_power(),
        }
    }

    pub fn step(&mut self) {
        let k = self.k as i64;
        let weight = rat(k * (self.m as i64 - k + 1), 1);
        let next = self
            .cur
            .compose_theta_left()
            .sub(&self.prev.mul_x(self.g_power).scale(&weight));
        self.prev = std::mem::replace(&mut self.cur, next);
        self.k += 1;
    }
}

/// Raw (un-normalized) ladder `L_0, …, L_{k_max}` for the given base and `m`.
pub fn ladder(base: BaseEquation, m: u32, k_max: u32) -> Vec<ThetaOperator> {
    let mut out = vec![ThetaOperator::one()];
    if k_max == 0 {
        return out;
    }
    let mut st = LadderState::new(base, m);
    out.push(st.cur.clone());
    while st.k < k_max {
        st.step();
        out.push(st.cur.clone());
    }
    out
}

/// Normalized `L_{m+1}`: the annihilator of `y^m`.
///
/// For [`BaseEquation::SqrtExp`] this is `S_m` of x-degree `m₊`; for
/// [`BaseEquation::BesselK`] it is `T_m`, even in x with x-degree `2m₊`.
pub fn symmetric_power(base: BaseEquation, m: i64) -> Result<ThetaOperator, AnnihilatorError> {
    if m < 1 {
        return Err(AnnihilatorError::InvalidPower(m));
    }
    let m = m as u32;
    let mut st = LadderState::new(base, m);
    while st.k <= m {
        st.step();
    }
    Ok(st.cur.normalize())
}

/// `m₊ = ⌈m/2⌉`.
pub fn m_plus(m: u32) -> u32 {
    m.div_ceil(2)
}

/// One row of [`scaling_lemma_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub k: u32,
    /// `L_k` over `θ² − x²` has only even x-powers.
    pub even: bool,
    /// The transformed `L_k` is a scalar multiple of `M_k`.
    pub proportional: bool,
    /// `M_k / L_k(2√x, 2θ)` when proportional.
    #[serde(with = "crate::serde_util::opt_rational")]
    pub scalar: Option<Rational>,
}

/// The substitution `x -> 2√x`, `θ -> 2θ` on an operator even in x:
/// `x^{2i} P(θ)` becomes `4^i x^i P(2θ)`.
pub fn half_power_substitution(op: &ThetaOperator) -> Option<ThetaOperator> {
    if !op.is_even_in_x() {
        return None;
    }
    let two = rat(2, 1);
    let zero = rat(0, 1);
    Some(ThetaOperator::from_terms(op.terms().map(|(j, p)| {
        let i = j / 2;
        (i, p.substitute_affine(&two, &zero).scale(&rat(4i64.pow(i), 1)))
    })))
}

/// Compare the two ladders term by term: `M_k` (base `θ² − x`) against
/// `L_k(2√x, 2θ)` (base `θ² − x²`) for `k = 0..=k_max`.
pub fn scaling_lemma_check(m: u32, k_max: u32) -> Result<Vec<ScalingRow>, AnnihilatorError> {
    if m < 1 {
        return Err(AnnihilatorError::InvalidPower(m as i64));
    }
    if k_max > m + 1 {
        return Err(AnnihilatorError::IndexOutOfRange { k: k_max, limit: m + 1 });
    }
    let ms = ladder(BaseEquation::SqrtExp, m, k_max);
    let ls = ladder(BaseEquation::BesselK, m, k_max);
    Ok(ms
        .iter()
        .zip(&ls)
        .enumerate()
        .map(|(k, (mk, lk))| {
            let k = k as u32;
            match half_power_substitution(lk) {
                None => ScalingRow { k, even: false, proportional: false, scalar: None },
                Some(t) => {
                    let scalar = proportionality(mk, &t);
                    ScalingRow { k, even: true, proportional: scalar.is_some(), scalar }
                }
            }
        })
        .collect())
}

/// `c` with `a = c·b`, if one exists.
pub fn proportionality(a: &ThetaOperator, b: &ThetaOperator) -> Option<Rational> {
    let (j, pb) = b.terms().next()?;
    let lead_b = pb.leading()?.clone();
    let lead_a = a.coeff(j).leading()?.clone();
    let c = lead_a / lead_b;
    (b.scale(&c) == *a).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::ThetaPoly;

    fn op(s: &str) -> ThetaOperator {
        s.parse().unwrap()
    }

    #[test]
    fn first_power_is_the_base() {
        assert_eq!(symmetric_power(BaseEquation::BesselK, 1).unwrap(), op("theta^2 - x^2"));
        assert_eq!(symmetric_power(BaseEquation::SqrtExp, 1).unwrap(), op("theta^2 - x"));
    }

    #[test]
    fn square_of_sqrt_exp() {
        assert_eq!(
            symmetric_power(BaseEquation::SqrtExp, 2).unwrap(),
            op("theta^3 - 2*x*(2*theta + 1)")
        );
    }

    #[test]
    fn rejects_nonpositive_power() {
        assert_eq!(
            symmetric_power(BaseEquation::BesselK, 0),
            Err(AnnihilatorError::InvalidPower(0))
        );
        assert!(scaling_lemma_check(3, 5).is_err());
    }

    #[test]
    fn shapes_for_small_m() {
        for m in 1..=8u32 {
            let t = symmetric_power(BaseEquation::BesselK, m as i64).unwrap();
            let s = symmetric_power(BaseEquation::SqrtExp, m as i64).unwrap();
            assert!(t.is_even_in_x());
            assert_eq!(t.x_degree(), Some(2 * m_plus(m)));
            assert_eq!(s.x_degree(), Some(m_plus(m)));
            assert_eq!(t.order(), Some(m as usize + 1));
            assert_eq!(s.order(), Some(m as usize + 1));
            assert_eq!(t.coeff(0), ThetaPoly::theta().pow(m + 1));
        }
    }

    #[test]
    fn lemma_small_indices() {
        let rows = scaling_lemma_check(4, 5).unwrap();
        assert_eq!(rows[0].scalar, Some(rat(1, 1)));
        assert_eq!(rows[1].scalar, Some(rat(1, 2)));
        assert!(rows.iter().all(|r| r.even && r.proportional));
        assert_eq!(rows[5].scalar, Some(rat(1, 32)));
    }
}

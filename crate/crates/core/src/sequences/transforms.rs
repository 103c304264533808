//! Moving between θ-operators and recurrences, and the two rescalings that
//! turn moment and convolution sequences into integer-friendly ones.

use num_traits::Zero;

use super::{Recurrence, SequenceError};
use crate::theta::{ThetaOperator, ThetaPoly};
use crate::Rational;

/// `Σ xʲP_j(θ)` annihilates `Σ dₙxⁿ` iff `Σ_j P_j(n−j)·d_{n−j} = 0`.
pub fn operator_to_recurrence(a: &ThetaOperator) -> Recurrence {
    let d = a.x_degree().unwrap_or(0);
    let coeffs = (0..=d).map(|j| a.coeff(j).shift_int(-(j as i64))).collect();
    Recurrence::new(1, coeffs).expect("step 1 is valid").normalize()
}

/// Inverse of [`operator_to_recurrence`]: `P_j(θ) = c_j(θ + j)`.
pub fn recurrence_to_operator(r: &Recurrence) -> Result<ThetaOperator, SequenceError> {
    if r.step() != 1 {
        return Err(SequenceError::InvalidStep(r.step()));
    }
    Ok(ThetaOperator::from_terms(
        r.coeffs().iter().enumerate().map(|(j, c)| (j as u32, c.shift_int(j as i64))),
    )
    .normalize())
}

/// The step-2 recurrence in `k` for the moments `c_k = ∫₀^∞ x^k y(x) dx` of a
/// solution `y` of `T = Σ x^{2j}P_j(θ)`:
/// `Σ_j P_j(−(k+1)−2j)·c_{k+2j} = 0`.
pub fn moment_recurrence(t: &ThetaOperator) -> Result<Recurrence, SequenceError> {
    if !t.is_even_in_x() {
        return Err(SequenceError::OddOperator);
    }
    let big_j = t.x_degree().unwrap_or(0) / 2;
    // backward form around k: c_i(k) = P_{J−i}(−k − 1 + 2i)
    let coeffs = (0..=big_j)
        .map(|i| {
            let p = t.coeff(2 * (big_j - i));
            p.substitute_affine(&Rational::from_integer((-1).into()), &Rational::from_integer((2 * i as i64 - 1).into()))
        })
        .collect();
    Ok(Recurrence::new(2, coeffs)?.normalize())
}

/// `∏_{s=lo}^{hi−1} (n − s)²`.
fn falling_square(lo: usize, hi: usize) -> ThetaPoly {
    (lo..hi).fold(ThetaPoly::one(), |acc, s| {
        let f = ThetaPoly::linear(Rational::from_integer((-(s as i64)).into()));
        &acc * &(&f * &f)
    })
}

/// The operator for `y = Σ dₙxⁿ` with `dₙ = r^{2n}/n!²·c_{2n+1}`, where
/// `c_k` are the moments of a solution of the even operator `T`.
pub fn gamma_rescale_ode(t: &ThetaOperator, r: &Rational) -> Result<ThetaOperator, SequenceError> {
    if r.is_zero() {
        return Err(SequenceError::ZeroScale);
    }
    let odd = moment_recurrence(t)?.sublattice(1)?;
    let lambda = r * r;
    let order = odd.order();
    let mut weight = Rational::from_integer(1.into());
    let mut coeffs = Vec::with_capacity(order + 1);
    // Σ c_i(n)·e_{n−i} with e_n = n!²λ^{−n}dₙ, multiplied through by λⁿ/(n−J)!²
    for (i, c) in odd.coeffs().iter().enumerate() {
        coeffs.push(&c.scale(&weight) * &falling_square(i, order));
        weight *= &lambda;
    }
    recurrence_to_operator(&Recurrence::new(1, coeffs)?.primitive_part())
}

/// Given `S` annihilating `Σ aₙxⁿ`, the operator annihilating `Σ n!²aₙxⁿ`.
pub fn factorial_square_rescale(s: &ThetaOperator) -> ThetaOperator {
    let rec = operator_to_recurrence(s);
    let coeffs = rec.coeffs().iter().enumerate().map(|(j, c)| c * &falling_square(0, j)).collect();
    let lifted = Recurrence::new(1, coeffs).expect("step 1 is valid").primitive_part();
    recurrence_to_operator(&lifted).expect("step 1 recurrence")
}

/// The operator for `y = Σ c_{2n+p}·zⁿ` (`p` = parity) read off the step-2
/// moment recurrence of `T`, with no factorial weight.
pub fn moment_sublattice_ode(t: &ThetaOperator, parity: u32) -> Result<ThetaOperator, SequenceError> {
    let sub = moment_recurrence(t)?.sublattice(parity)?.primitive_part();
    recurrence_to_operator(&sub)
}

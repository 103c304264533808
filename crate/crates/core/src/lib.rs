//! Symbolic and numeric tools around powers of the Bessel function `K₀`.
//!
//! The crate builds annihilating θ-operators for `K₀(x)^m` and for powers of
//! `Σ xⁿ/n!²`, turns them into moment recurrences and Apéry-like sequence
//! recurrences, moves equations to the point at infinity, and checks the
//! resulting identities with exact rationals and high-precision quadrature.

pub mod annihilator;
pub mod numerics;
pub mod pipeline;
pub mod sequences;
pub(crate) mod serde_util;
pub mod theta;

pub use num_rational::BigRational as Rational;

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

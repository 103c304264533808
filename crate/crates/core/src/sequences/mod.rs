//! Recurrences, sequence tables and the operator ↔ recurrence dictionary.

mod limits;
mod recurrence;
mod table;
mod transforms;

use thiserror::Error;

pub use limits::{apery_limit, asymptotic_fit, AsymptoticFit};
pub use recurrence::Recurrence;
pub use table::{convolution_series, solve_series, verrill_coefficients, verrill_integers, Provenance, SequenceTable};
pub use transforms::{
    factorial_square_rescale, gamma_rescale_ode, moment_recurrence, moment_sublattice_ode, operator_to_recurrence,
    recurrence_to_operator,
};

use crate::theta::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("unsupported recurrence step {0}")]
    InvalidStep(u32),
    #[error("parity {parity} out of range for step {step}")]
    InvalidParity { parity: u32, step: u32 },
    #[error("operator has odd powers of x")]
    OddOperator,
    #[error("scale must be nonzero")]
    ZeroScale,
    #[error("power must be at least 1, got {0}")]
    InvalidPower(u32),
    #[error("need at least {need} initial values, got {got}")]
    InitTooShort { need: usize, got: usize },
    #[error("leading coefficient vanishes at n = {0}; supply more initial values")]
    SingularLeadingCoefficient(usize),
    #[error("denominator sequence vanishes at n = {0}")]
    ZeroDenominator(usize),
    #[error("non-positive value at n = {0}")]
    NonPositiveValues(usize),
    #[error("fit window {lo}..={hi} unusable for a table of length {len}")]
    BadWindow { lo: usize, hi: usize, len: usize },
    #[error("malformed table line {0}")]
    BadTable(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

//! The derivation chains end to end, with a verdict for each identity.
//!
//! Every check returns a serializable report that carries its own verdict;
//! [`Verdict::verdict`] turns a failed report into the matching error.

mod chain;
pub mod fixtures;
mod numeric;

use thiserror::Error;

pub use chain::{bessel_fan_check, bessel_fan_with, derive_chain, main_theorem_check, DerivationReport, FanReport, StageMatch};
pub use fixtures::{check_all as check_fixtures, Discrepancy, DiscrepancyKind, Fixture, FixtureCheck};
pub use numeric::{
    constants_5_6_check, constants_5_6_with, fan_numeric_check, fan_numeric_with, theorem_d4_check, theorem_d4_with,
    ConstantsReport, FanNumeric, IdentityRow, TheoremD4Report,
};

use crate::annihilator::AnnihilatorError;
use crate::numerics::NumericsError;
use crate::sequences::SequenceError;
use crate::theta::{ParseError, ThetaError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("m = {m} outside the supported range {min}..={max}")]
    InvalidDegree { m: u32, min: u32, max: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("stage mismatch for m = {m}: {stage}")]
    StageMismatch { m: u32, stage: String },
    #[error("series not annihilated for m = {m}; first nonzero coefficient at order {order}")]
    SeriesNotAnnihilated { m: u32, order: usize },
    #[error("tolerance exceeded: {what} (residual {residual})")]
    ToleranceExceeded { what: String, residual: String },
    #[error("fixture {id}: {message}")]
    Fixture { id: String, message: String },
    #[error(transparent)]
    Theta(#[from] ThetaError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
    #[error(transparent)]
    Annihilator(#[from] AnnihilatorError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Reports that can fail.
pub trait Verdict {
    fn verdict(&self) -> Result<(), PipelineError>;

    fn passed(&self) -> bool {
        self.verdict().is_ok()
    }

    /// Human-readable summary, several lines.
    fn to_text(&self) -> String;
}

pub(crate) fn check_range(m: u32, min: u32, max: u32) -> Result<(), PipelineError> {
    if (min..=max).contains(&m) {
        Ok(())
    } else {
        Err(PipelineError::InvalidDegree { m, min, max })
    }
}

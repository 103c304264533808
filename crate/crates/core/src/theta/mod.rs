//! Exact arithmetic on θ-polynomials and θ-operators `Σ x^j P_j(θ)`.

mod json;
mod operator;
mod poly;
mod text;

use thiserror::Error;

pub use json::{OperatorJson, TermJson};
pub(crate) use json::{poly_from_strings, poly_to_strings};
pub use operator::ThetaOperator;
pub use poly::ThetaPoly;
pub use text::{parse_poly, ParseError};
pub(crate) use text::{grouped, parse_with, Algebra, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("scale factor must be nonzero")]
    ZeroScale,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed operator JSON: {0}")]
    Json(String),
}

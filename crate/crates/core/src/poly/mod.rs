//! Weighted-graded multivariate polynomials, ring maps, Hessians, line
//! restrictions, resultants and subresultants.

mod json;
mod modular;
mod ops;
mod polynomial;
mod resultant;
mod table;
mod univariate;

use thiserror::Error;

use crate::arith::ArithError;

pub use json::{PolyJson, TermJson, VarJson};
pub use ops::{
    elementary_symmetric, hessian_det, line_parameter_table, restrict_to_line, substitute, BinaryFormSlice, Chart,
    SpecializationMap,
};
pub use modular::resultant_multimodular;
pub use polynomial::Polynomial;
pub use resultant::{
    bareiss_det, newton_interpolate, principal_subresultant, principal_subresultant_uni,
    principal_subresultant_with_degrees, resultant, resultant_by_interpolation, resultant_with_degrees, uni_to_poly,
    univariate_gcd, ExactRing,
};
pub use table::{Monomial, VariableTable};
pub use univariate::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("no image given for variable `{0}`")]
    IncompleteMap(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("index out of range: {0}")]
    InvalidIndex(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

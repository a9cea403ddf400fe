//! Explicit enumerative solutions: the 27 lines on the Fermat cubic (exact),
//! flexes and bitangents of plane quartics (certified numerics), and the
//! induced permutation actions of finite symmetry groups.

mod action;
mod bitangent;
mod equivalence;
mod flex;
mod forms;
mod lines;
mod projective;

use thiserror::Error;

use crate::arith::ArithError;
use crate::numeric::NumericError;
use crate::poly::PolyError;

pub use action::{
    common_fixed_check, induced_permutation, is_projective_identity, ActionReport, ElementReport, GroupAction, ObjectKind,
    ProjectiveMatrix,
};
pub use bitangent::{bitangent_lines, BitangentOutcome, ChartView, FlexMatch, FlexTangent};
pub use equivalence::{
    verify_projective_equivalence, Discrepancy, EquivalenceJson, EquivalenceOutcome, NumericProportionality, TermMismatch,
};
pub use flex::flex_points;
pub use forms::{
    coordinate_changes, fermat_quartic, klein_cyclotomic_form, klein_equivalence_matrix, klein_h_elements,
    klein_quartic, klein_standard_form, nearest_root_index, ComplexForm, CoordinateChange, KleinField,
};
pub use lines::{
    fermat_cubic, fermat_k_elements, fermat_lines, line_on_surface, lines_induced_permutation, witness_line, Line3D,
};
pub use projective::{dedup, fubini_study, normalize, Projective, SolutionSet, SolutionSetJson};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("rank-deficient line: {0}")]
    InvalidLine(String),
    #[error("object {object} has no image within tolerance (nearest at distance {distance:e})")]
    NotInvariant { object: usize, distance: f64 },
    #[error("objects {first} and {second} both map onto object {target}")]
    CollisionAtTolerance { target: usize, first: usize, second: usize },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("degenerate coordinates: {0}")]
    DegenerateCoordinates(String),
    #[error("ambiguous classification of candidate {candidate}: relative discriminant {rel_disc:e}")]
    AmbiguousClassification { candidate: String, rel_disc: f64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl From<NumericError> for GeometryError {
    fn from(e: NumericError) -> Self {
        GeometryError::NumericFailure(e.to_string())
    }
}

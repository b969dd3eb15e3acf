//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received a value outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The inscribed axis-parallel rectangle degenerates (its vertical side is
    /// not positive) because the shape is at or beyond the critical shape.
    #[error("inscribed rectangle degenerates: shape {shape} >= critical shape {critical} at angle {theta}")]
    DegenerateInscribed {
        theta: f64,
        shape: f64,
        critical: f64,
    },

    /// The area ratio is undefined: the shape is at or beyond the critical shape.
    #[error("shape {shape} >= critical shape {critical}: inscribed area is not positive")]
    DegenerateShape { shape: f64, critical: f64 },

    /// No shape in the admissible interval attains the requested area ratio.
    #[error("area ratio {at_min} at the minimal shape already exceeds the target {target}")]
    Infeasible { at_min: f64, target: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("index {index} out of range (len {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Simple-function supports must be pairwise disjoint.
    #[error("supports overlap: common area {overlap} exceeds tolerance {tolerance}")]
    OverlappingSupports { overlap: f64, tolerance: f64 },

    #[error("sampling window does not contain family member {member}")]
    WindowTooSmall { member: usize },

    /// The Young-function mass of the test function vanishes.
    #[error("Young-function mass is zero")]
    PhiMassZero,

    /// The rotated test square is not contained in every family rectangle.
    #[error("test square not contained in every rectangle of block {block}")]
    ContainmentFailed { block: usize },
}

//! Numerical toolkit for homothecy-invariant differentiation bases of oriented
//! rectangles in the plane whose shape (long side over short side) is a
//! prescribed function of the angle between the long side and the horizontal.
//!
//! The crate provides exact planar geometry for oriented rectangles and convex
//! polygons, the closed-form area laws tying a rectangle to its axis-parallel
//! bounding and inscribed companions, a monotone solver producing shape
//! functions with a prescribed bounding/inscribed area ratio, block angle
//! constructions with per-block constant shapes, Young-function mass
//! accounting, and deterministic Monte Carlo probes of the associated maximal
//! operator.

pub mod basis;
pub mod blocks;
pub mod error;
pub mod geometry;
pub mod maximal;
pub mod orlicz;
pub mod report;
mod sampling;
pub mod shape_law;

pub use error::{Error, Result};

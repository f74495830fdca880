//! Experimental toolkit for planar star bodies whose zero set contains an
//! irrationally sloped half-line.
//!
//! The crate provides the building blocks for desk-scale experiments on such
//! bodies: distance-function geometry and strip widths ([`geometry`]), exact
//! continued fractions of quadratic irrationals ([`cfrac`]), rotation orbits
//! and arc unions on the unit circle ([`circle`]), local ubiquity checks
//! ([`ubiquity`]), and the coverage experiments tying them together
//! ([`experiment`]).

pub mod cfrac;
pub mod circle;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod ubiquity;

pub use cfrac::{CFExpansion, Real, Surd};
pub use circle::{CircleOrbit, GapStructure, IntervalUnion};
pub use error::{Error, Result};
pub use experiment::{ContrastCurves, CoverageResult, CrossingSequence, RhoSequence};
pub use geometry::{ConditionReport, StarBodyFn, Vec2};
pub use ubiquity::{UbiquityConfig, UbiquityReport};

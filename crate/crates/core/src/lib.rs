//! Inner-metric invariants of isolated complex surface singularities,
//! computed from a decorated dual resolution graph.
//!
//! The pipeline: parse a [`document::GraphDocument`], [`graph::validate`] it,
//! solve multiplicities and inner rates with [`invariants`], then explore
//! blowups ([`modification`]), inner contacts ([`contact`]) or every
//! admissible polar configuration ([`polar`]).

pub mod contact;
pub mod document;
pub mod fixtures;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod modification;
pub mod polar;

pub use document::{GraphDocument, ParseError};
pub use graph::{Divisor, DualGraph, Metric, PLFunction, PointOnGraph, VertexData};
pub use invariants::InvariantBundle;
pub use linalg::{Rational, RationalMatrix};

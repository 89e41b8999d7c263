//! Bundled example graphs.

use crate::document::{parse, GraphDocument};
use crate::graph::DualGraph;

pub const E8: &str = include_str!("../fixtures/e8.graph");
pub const A2_MIN: &str = include_str!("../fixtures/a2_min.graph");
pub const A2_NASH: &str = include_str!("../fixtures/a2_nash.graph");
pub const BS_TNEQ0: &str = include_str!("../fixtures/bs_tneq0.graph");
pub const BS_T0: &str = include_str!("../fixtures/bs_t0.graph");
pub const SMOOTH_ORD0: &str = include_str!("../fixtures/smooth_ord0.graph");

/// `(file name, contents)` of every bundled fixture.
pub const ALL: [(&str, &str); 6] = [
    ("e8.graph", E8),
    ("a2_min.graph", A2_MIN),
    ("a2_nash.graph", A2_NASH),
    ("bs_tneq0.graph", BS_TNEQ0),
    ("bs_t0.graph", BS_T0),
    ("smooth_ord0.graph", SMOOTH_ORD0),
];

fn load(text: &str) -> GraphDocument {
    parse(text).expect("bundled fixture parses")
}

pub fn documents() -> Vec<(&'static str, GraphDocument)> {
    ALL.iter().map(|(name, text)| (*name, load(text))).collect()
}

pub fn e8() -> DualGraph {
    load(E8).graph
}

pub fn a2_min() -> DualGraph {
    load(A2_MIN).graph
}

pub fn a2_nash() -> DualGraph {
    load(A2_NASH).graph
}

pub fn bs_tneq0() -> DualGraph {
    load(BS_TNEQ0).graph
}

pub fn bs_t0() -> DualGraph {
    load(BS_T0).graph
}

pub fn smooth_ord0() -> DualGraph {
    load(SMOOTH_ORD0).graph
}

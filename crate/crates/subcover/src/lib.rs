//! File formats, table rendering and parallel helpers on top of
//! [`subcover_core`].

pub mod json;
pub mod parallel;
pub mod table;

use json::{AnchorsDoc, FormatError};
use subcover_core::bounds::Anchor;

/// Published values of `f(n, k, 1)` obtained by exhaustive search, for
/// the cells the recursions cannot reach on their own.
pub const RED_ANCHORS_JSON: &str = include_str!("../data/red.json");

pub fn red_anchors() -> Result<Vec<Anchor>, FormatError> {
    serde_json::from_str::<AnchorsDoc>(RED_ANCHORS_JSON)?.to_anchors()
}

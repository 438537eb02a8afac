//! Observation windows, point patterns and the deterministic geometry behind
//! the edge corrections.

mod correction;
mod pattern;
mod window;

pub use correction::EdgeCorrection;
pub(crate) use pattern::squared_distance;
pub use pattern::{PointPattern, DUPLICATE_TOLERANCE};
pub use window::{CubeWindow, DEFAULT_ROTATION_NODES};

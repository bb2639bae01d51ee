//! Exact quadratic invariant laminations under angle doubling: minor
//! laminations, pullbacks of critical portraits, tuning, and SVG rendering.

pub mod angle;
pub mod bits;
pub mod chord;
pub mod cli;
pub mod lamination;
pub mod leaf_file;
pub mod limit;
pub mod pullback;
pub mod qml;
pub mod render;
pub mod renorm;

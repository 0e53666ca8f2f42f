//! Arbitrary-dimension, arbitrary-degree T-spline meshes over integer index domains.
//!
//! The crate builds box meshes by symmetric bisection, extracts anchors and their
//! knot index vectors, evaluates T-splines, and decides abstract / geometric
//! analysis-suitability and weak / strong dual-compatibility.

pub mod analysis;
pub mod anchors;
pub mod dual_compat;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod mesh;
pub mod region;
pub mod splines;
pub mod suitability;
pub mod topology;
pub mod verify;

pub use analysis::Analysis;
pub use error::{Error, Result};

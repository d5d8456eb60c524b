//! Diameter partitions of convex bodies in finite-dimensional normed spaces:
//! exact geometry, constructive partition schemes, covering checks,
//! Banach–Mazur sandwich certificates and the bound pipeline built on them.

pub mod error;
pub mod geometry;

pub use error::{Error, Result};
pub mod banach_mazur;
pub mod bounds;
pub mod coverings;
pub mod oracle;
pub mod partitions;

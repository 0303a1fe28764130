//! Combinatorics of degenerations of Grassmannians along lattice configurations.

pub mod admissible;
pub mod affine_weyl;
pub mod error;
pub mod fp;
pub mod independence;
pub mod lattice;
pub mod multidegree;
pub mod quiver;
pub mod samples;
pub mod verify;

pub use error::Error;

//! Up/down Grover walks, discriminants and combinatorial Laplacians on finite
//! simplicial complexes, with spectral and orientability checks, walk simulation and
//! Bloch bands for the triangulated cylinder.

pub mod complex;
pub mod error;

pub use error::{Error, Result};
pub mod linalg;
pub mod operators;
pub mod spectra;
pub mod walk;
pub mod bloch;
pub mod verify;

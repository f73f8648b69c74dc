//! Harmonic analysis of positive definite functions on finite groups.
//!
//! The crate implements the non-commutative Fourier transform between
//! complex functions on a finite group and families of matrix blocks indexed
//! by irreducible representations, positive-definiteness testing (block
//! criterion plus a brute-force Gram oracle), the GNS reconstruction, a
//! library of positive-definite maps on group function spaces, and
//! separability analysis of functions on product groups (PPT and map-based
//! detection).

pub mod bundled;
pub mod detect;
pub mod error;
pub mod group;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod positivity;

pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupData, Irrep, IrrepTable, ProductGroup};
pub use harmonic::{FourierBlocks, GroupFunction};

//! Exact arithmetic for cusp singularity links.
//!
//! A cusp link is a torus bundle over the circle whose monodromy `A` lies in
//! SL(2, Z) with trace at least 3. This crate computes the resolution cycle of
//! such a monodromy via minus-sign continued fractions, its dual cycle, all
//! normal (Galois) covers of base degree 1 through 4, and decides whether any
//! of those covers is a complete intersection.
//!
//! Everything is computed with unbounded integers; there is no floating point
//! on any decision path.

pub mod arith;
pub mod cfrac;
pub mod cycle;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod verify;

pub use cfrac::{CfExpansion, QuadIrr};
pub use cycle::Cycle;
pub use error::{Error, Result};
pub use lattice::{CoverRecord, EnumerateOptions, Lattice2};
pub use matrix::IntMatrix2;
pub use verify::{Certificate, Verdict};

/// Unbounded signed integer used for every scalar.
pub type Int = num_bigint::BigInt;

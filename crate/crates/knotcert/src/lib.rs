//! Exact-arithmetic knot invariants and certificate checking.
//!
//! The crate computes Alexander polynomials and signatures from planar
//! diagrams, identifies which torus knot (if any) a diagram could represent,
//! and generates or verifies the finite-field representation certificates,
//! normal-surface coordinate checks, and bounded integral 1-cocycles used by
//! the `knotcert` command-line tool.
//!
//! All arithmetic is exact: arbitrary-precision integers throughout, with
//! machine-word residues used only inside provably sufficient Chinese
//! remainder reconstructions.

mod arith;

pub mod braid;
pub mod diagram;

pub mod homology;
pub mod intpoly;
pub mod invariants;
pub mod normal;
pub mod repcert;
pub mod snf;
pub mod torus;
pub mod triangulation;

pub use diagram::KnotDiagram;
pub use intpoly::{IntPoly, LaurentPoly};
pub use torus::TorusParams;

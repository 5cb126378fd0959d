//! Homothetic packings of centrally symmetric convex bodies in the plane,
//! their rigidity matrices, and (2,k)-sparsity of their contact graphs.
//!
//! * [`body`]: norms, duality maps, radial profiles and profile surgery.
//! * [`sparsity`]: contact graphs, the pebble game, planar embeddings and
//!   random triangulations.
//! * [`rigidity`]: packings, rigidity and packing matrices, rank policy,
//!   stresses.
//! * [`packer`]: circle packing, continuation to other bodies, opening
//!   flows and re-solves.
//! * [`harness`]: randomized campaigns, densification, file formats,
//!   SVG output and the command-line interface.
//!
//! The `examples/` directory has one runnable program per capability.

// Comparisons are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod body;
pub mod harness;
pub mod packer;
pub mod rigidity;
pub mod sparsity;

//! Finite-volume certification toolkit for high-temperature uniqueness of
//! quenched Gibbs fields on graphs of unbounded vertex degree.
//!
//! The crate is organized bottom-up:
//!
//! - [`graph`]: simple graphs, balls, vertex boundaries, and exhaustive
//!   enumeration of simple paths and animals (connected subgraphs).
//! - [`temperedness`]: animal averages of a growth function of the degree,
//!   windowed temperedness checks, repulsive graphs, and the counting bounds
//!   that follow from temperedness.
//! - [`disorder`]: laws of the interaction norms, their exponential moments,
//!   the edge weights `exp(4 beta |W|) - 1`, and the critical inverse
//!   temperature.
//! - [`gibbs`]: exact local Gibbs kernels on finite spin spaces, the path sum
//!   bounding boundary sensitivity, and brute-force checks of the inequality
//!   and identity behind it.
//! - [`uniqueness`]: the uniqueness certificate, tail bounds, and quenched
//!   decay experiments.
//! - [`generators`], [`io`], [`cli`]: graph families, file formats, and the
//!   command-line driver.

// NaN has to fail the range checks, so they are written as !(x >= a).
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod caps;
pub mod cli;
pub mod disorder;
pub mod error;
pub mod generators;
pub mod gibbs;
pub mod graph;
pub mod io;
pub mod quad;
pub mod temperedness;
pub mod uniqueness;

pub use caps::{Caps, Completeness};
pub use error::{Error, Result};
pub use graph::{Animal, Graph, SimplePath, Volume};

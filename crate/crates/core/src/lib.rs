//! Simulation and verification engine for two lattice segment-percolation
//! models on `Z^d` windows.
//!
//! Sites are occupied independently with density `p`. Every pair of occupied
//! sites that differ in one coordinate, with only unoccupied sites between
//! them, forms a *feasible segment*. Segments are coloured blue either by the
//! **one-choice** rule (each occupied site picks one of its `2d` directions
//! uniformly and the segment it points along becomes blue) or by the
//! **independent** rule (each segment is blue with probability `λ`).
//!
//! Module map:
//!
//! - [`lattice`]: finite torus/box geometry, site sampling, seeded streams.
//! - [`models`]: feasible segments and the colouring rules, including the
//!   turquoise and mixed-percolation constructions used for couplings.
//! - [`cluster`]: union-find clustering with torus-wrap detection.
//! - [`analytic`]: closed-form local probabilities, branching means, the
//!   compass eigenvalue criterion, block-event probabilities, and phase-region
//!   classification.
//! - [`montecarlo`]: replicated estimation, critical-point search, sweeps,
//!   block-event simulation, and the truncated-sum enumeration oracle.
//! - [`cli`]: the `seglat` command-line driver.

pub mod analytic;
pub mod cli;
pub mod cluster;
mod error;
pub mod lattice;
pub mod models;
pub mod montecarlo;

pub use error::{Error, Result};

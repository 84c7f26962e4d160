//! Finite windows of `Z^d`: geometry, site configurations and random streams.

mod geometry;
mod rng;
pub(crate) mod sites;

pub use geometry::{make_geometry, Boundary, Direction, Geometry};
pub use rng::{derive_seed, RngStream, StreamRole};
pub use sites::{bias_bound, next_occupied, sample_sites, SiteConfig, BIAS_LIMIT};

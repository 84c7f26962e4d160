//! Closed-form probabilities and classification rules.
//!
//! The local formulas are written once, generically over [`Exact`], so the
//! same expressions evaluate in `f64` or as exact rationals.

mod block;
mod compass;
pub mod exact;
mod local;
mod region;

pub use block::{block_event_a_prob, block_event_c_prob, block_r, good_block_lower_bound, BlockParams};
pub use compass::{
    compass_matrix, compass_spectral_radius, compass_threshold, spectral_radius_nonnegative,
    CompassThreshold, POWER_TOLERANCE, THRESHOLD_TOLERANCE,
};
pub use exact::Exact;
pub use local::{
    branching_means, collinear_corr_independent, collinear_pair_prob_one_choice, lambda_one_choice,
    perp_pair_prob_one_choice, vertex_blue_prob_independent, vertex_blue_prob_one_choice, BranchingMeans,
};
pub use region::{
    classify_region, CriticalCurve, PhaseRegion, RegionConfig, BOND_THRESHOLD_CUBIC, BOND_THRESHOLD_SQUARE,
    SITE_THRESHOLD_CUBIC, SITE_THRESHOLD_SQUARE,
};

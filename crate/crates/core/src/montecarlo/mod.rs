//! Replicated Monte Carlo estimation.
//!
//! Every replicate draws its randomness from streams keyed by
//! `(master_seed, replicate, role)`, and replicate results are reduced in
//! index order, so outputs do not depend on the number of threads.

mod block;
mod critical;
mod estimate;
mod local;
mod oracle;
mod runner;
mod spec;
mod wrap;

pub use block::{block_event_mc, BlockEstimates};
pub use critical::{
    critical_search, frontier_sweep, mixed_curve_estimate, CriticalEstimate, Crossing, MixedCurve,
    MixedCurvePoint, SearchOptions, SweepResult, SweepRow, Vary,
};
pub use estimate::{to_csv, CsvRow, EstimateWithCI, CSV_HEADER};
pub use local::{estimate_local_event, LocalEstimate, LocalEvent};
pub use oracle::{truncated_sum_oracle, OracleValue};
pub use runner::Runner;
pub use spec::ModelSpec;
pub use wrap::{wrapping_probability, WrapEstimate};

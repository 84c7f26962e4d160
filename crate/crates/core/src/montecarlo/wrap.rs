use serde::{Deserialize, Serialize};

use super::estimate::check_replicates;
use super::{EstimateWithCI, ModelSpec, Runner};
use crate::cluster::{clusters, wraps_any};
use crate::lattice::{Boundary, Geometry};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrapEstimate {
    /// Fraction of replicates with a component wrapping some axis.
    pub wrap: EstimateWithCI,
    /// Largest component over the number of sites.
    pub largest_fraction: EstimateWithCI,
}

/// Wrapping probability on the `L^d` torus.
pub fn wrapping_probability(
    spec: &ModelSpec,
    length: usize,
    replicates: usize,
    master_seed: u64,
    runner: &Runner,
) -> Result<WrapEstimate> {
    spec.validate()?;
    check_replicates(replicates)?;
    let g = Geometry::cube(spec.d, length, Boundary::Torus)?;
    let values = runner
        .map(replicates, |rep| {
            let blue = spec.sample(&g, master_seed, rep as u64)?;
            let report = clusters(&g, &blue);
            Ok((f64::from(u8::from(wraps_any(&report))), report.largest_fraction))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(WrapEstimate {
        wrap: EstimateWithCI::from_values(values.iter().map(|v| v.0).collect(), master_seed)?,
        largest_fraction: EstimateWithCI::from_values(values.iter().map(|v| v.1).collect(), master_seed)?,
    })
}

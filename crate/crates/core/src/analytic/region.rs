use crate::error::{check_density, check_unit};
use crate::{Error, Result};

/// Bond percolation threshold of the square lattice.
pub const BOND_THRESHOLD_SQUARE: f64 = 0.5;
/// Site percolation threshold of the square lattice (numerical estimate).
pub const SITE_THRESHOLD_SQUARE: f64 = 0.592746;
/// Bond percolation threshold of the cubic lattice (numerical estimate).
pub const BOND_THRESHOLD_CUBIC: f64 = 0.2488126;
/// Site percolation threshold of the cubic lattice (numerical estimate).
pub const SITE_THRESHOLD_CUBIC: f64 = 0.3116077;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PhaseRegion {
    NoPercolationA,
    PercolatesB,
    PercolatesCLine,
    Unknown,
}

impl std::fmt::Display for PhaseRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::NoPercolationA => "A",
            Self::PercolatesB => "B",
            Self::PercolatesCLine => "C",
            Self::Unknown => "unknown",
        })
    }
}

/// Piecewise-linear estimate of the mixed-percolation critical curve.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CriticalCurve {
    /// `(p, λ)` points sorted by `p`.
    pub points: Vec<(f64, f64)>,
}

impl CriticalCurve {
    /// Interpolated value at `p`, or `None` outside the sampled range.
    pub fn at(&self, p: f64) -> Option<f64> {
        let pts = &self.points;
        let first = pts.first()?;
        let last = pts.last()?;
        if p < first.0 || p > last.0 {
            return None;
        }
        let i = pts.partition_point(|&(x, _)| x < p);
        if i == 0 || pts[i].0 == p {
            return Some(pts[i].1);
        }
        let (x0, y0) = pts[i - 1];
        let (x1, y1) = pts[i];
        Some(y0 + (y1 - y0) * (p - x0) / (x1 - x0))
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RegionConfig {
    /// Bond threshold of the lattice, the critical `λ` at `p = 1`.
    pub bond_threshold: Option<f64>,
    pub mixed_curve: Option<CriticalCurve>,
    /// Constant `c` of the sufficient condition `λ > c·ln(1/q)`.
    pub log_constant: Option<f64>,
}

impl RegionConfig {
    /// Literature bond threshold for `d ∈ {2, 3}`, nothing else configured.
    pub fn for_dim(d: usize) -> Self {
        Self {
            bond_threshold: match d {
                2 => Some(BOND_THRESHOLD_SQUARE),
                3 => Some(BOND_THRESHOLD_CUBIC),
                _ => None,
            },
            ..Self::default()
        }
    }
}

/// Which proven regime `(p, λ)` falls in for the independent model.
pub fn classify_region(d: usize, p: f64, lambda: f64, config: &RegionConfig) -> Result<PhaseRegion> {
    if d < 2 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    check_density(p)?;
    check_unit("lambda", lambda)?;
    if lambda < p / (2 * d - 1) as f64 {
        return Ok(PhaseRegion::NoPercolationA);
    }
    if p == 1.0 {
        if config.bond_threshold.is_some_and(|b| lambda > b) {
            return Ok(PhaseRegion::PercolatesCLine);
        }
        return Ok(PhaseRegion::Unknown);
    }
    if let Some(c) = config.mixed_curve.as_ref().and_then(|c| c.at(p)) {
        if lambda > c {
            return Ok(PhaseRegion::PercolatesB);
        }
    }
    if let Some(c) = config.log_constant {
        if lambda > c * (1.0 / (1.0 - p)).ln() {
            return Ok(PhaseRegion::PercolatesB);
        }
    }
    Ok(PhaseRegion::Unknown)
}

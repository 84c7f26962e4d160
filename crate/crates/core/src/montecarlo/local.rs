use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::estimate::check_replicates;
use super::{EstimateWithCI, ModelSpec, Runner};
use crate::lattice::{bias_bound, Boundary, Direction, Geometry, BIAS_LIMIT};
use crate::models::BlueEdgeSet;
use crate::{Error, Result};

/// Local events at the origin `o`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalEvent {
    /// `(o, e1)` is blue.
    EdgeBlue,
    /// `o` is incident to a blue edge.
    VertexBlue,
    /// `(-e1, o)` and `(o, e1)` are both blue.
    PairCollinear,
    /// `(o, e1)` and `(o, e2)` are both blue.
    PairPerp,
    /// `(o, e1)` and `(k e1, (k+1) e1)` are both blue; `k` counts the sites
    /// between the edges, shared endpoint included.
    PairCollinearDistance(usize),
}

impl fmt::Display for LocalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EdgeBlue => f.write_str("edge-blue"),
            Self::VertexBlue => f.write_str("vertex-blue"),
            Self::PairCollinear => f.write_str("pair-collinear"),
            Self::PairPerp => f.write_str("pair-perp"),
            Self::PairCollinearDistance(k) => write!(f, "pair-distance:{k}"),
        }
    }
}

impl FromStr for LocalEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-blue" => Ok(Self::EdgeBlue),
            "vertex-blue" => Ok(Self::VertexBlue),
            "pair-collinear" => Ok(Self::PairCollinear),
            "pair-perp" => Ok(Self::PairPerp),
            _ => s
                .strip_prefix("pair-distance:")
                .and_then(|k| k.parse().ok())
                .map(Self::PairCollinearDistance)
                .ok_or_else(|| Error::InvalidEvent(format!("unknown event {s:?}"))),
        }
    }
}

impl LocalEvent {
    pub(crate) fn validate(&self, d: usize, length: usize) -> Result<()> {
        match *self {
            Self::PairPerp if d < 2 => Err(Error::InvalidEvent("pair-perp needs d >= 2".into())),
            Self::PairCollinearDistance(k) if k == 0 || k + 2 > length => Err(Error::InvalidEvent(format!(
                "pair-distance:{k} needs 1 <= k <= L - 2"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalEstimate {
    pub probability: EstimateWithCI,
    /// Empirical correlation of the two edge indicators, for
    /// [`LocalEvent::PairCollinearDistance`]; `None` when some replicate had
    /// no variation in edge colour.
    pub correlation: Option<EstimateWithCI>,
}

/// Fraction of translations of the torus where `event` holds, and for
/// distance pairs the per-replicate correlation estimate.
fn replicate_values(g: &Geometry, blue: &BlueEdgeSet, event: LocalEvent) -> (f64, Option<f64>) {
    let d = g.dim();
    let n = g.site_count();
    let edge = |s: usize, axis: usize| blue.is_blue(s * d + axis);
    match event {
        LocalEvent::EdgeBlue => (blue.count() as f64 / (n * d) as f64, None),
        LocalEvent::VertexBlue => (blue.blue_sites().count_ones() as f64 / n as f64, None),
        LocalEvent::PairCollinear => {
            let mut hits = 0usize;
            for s in 0..n {
                for a in 0..d {
                    let prev = g.step(s, Direction::new(a, false)).expect("torus");
                    hits += usize::from(edge(prev, a) && edge(s, a));
                }
            }
            (hits as f64 / (n * d) as f64, None)
        }
        LocalEvent::PairPerp => {
            let mut hits = 0usize;
            for s in 0..n {
                for a in 0..d {
                    for b in a + 1..d {
                        hits += usize::from(edge(s, a) && edge(s, b));
                    }
                }
            }
            (hits as f64 / (n * d * (d - 1) / 2) as f64, None)
        }
        LocalEvent::PairCollinearDistance(k) => {
            let mut hits = 0usize;
            for s in 0..n {
                for a in 0..d {
                    let coord = g.coord(s, a);
                    let far = s + ((coord + k) % g.len(a)) * g.stride(a) - coord * g.stride(a);
                    hits += usize::from(edge(s, a) && edge(far, a));
                }
            }
            let p11 = hits as f64 / (n * d) as f64;
            let lam = blue.count() as f64 / (n * d) as f64;
            let var = lam * (1.0 - lam);
            let corr = (var > 0.0).then(|| (p11 - lam * lam) / var);
            (p11, corr)
        }
    }
}

/// Estimates the probability of a local event on the `L^d` torus.
///
/// Each replicate averages the event indicator over all translations and
/// axes; the standard error is taken across replicates only.
pub fn estimate_local_event(
    spec: &ModelSpec,
    event: LocalEvent,
    length: usize,
    replicates: usize,
    master_seed: u64,
    runner: &Runner,
) -> Result<LocalEstimate> {
    spec.validate()?;
    check_replicates(replicates)?;
    event.validate(spec.d, length)?;
    if spec.uses_segments() {
        let bias = bias_bound(spec.p, length);
        if bias >= BIAS_LIMIT {
            return Err(Error::BiasBound {
                length,
                p: spec.p,
                bias,
            });
        }
    }
    let g = Geometry::cube(spec.d, length, Boundary::Torus)?;
    let values = runner
        .map(replicates, |rep| {
            let blue = spec.sample(&g, master_seed, rep as u64)?;
            Ok(replicate_values(&g, &blue, event))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let probability = EstimateWithCI::from_values(values.iter().map(|v| v.0).collect(), master_seed)?;
    let correlation = match event {
        LocalEvent::PairCollinearDistance(_) => values
            .iter()
            .map(|v| v.1)
            .collect::<Option<Vec<f64>>>()
            .map(|c| EstimateWithCI::from_values(c, master_seed))
            .transpose()?,
        _ => None,
    };
    Ok(LocalEstimate {
        probability,
        correlation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for e in [
            LocalEvent::EdgeBlue,
            LocalEvent::VertexBlue,
            LocalEvent::PairCollinear,
            LocalEvent::PairPerp,
            LocalEvent::PairCollinearDistance(3),
        ] {
            assert_eq!(e.to_string().parse::<LocalEvent>().unwrap(), e);
        }
        assert!("pair-distance:x".parse::<LocalEvent>().is_err());
    }

    #[test]
    fn bias_and_event_errors() {
        let r = Runner::new(1);
        let spec = ModelSpec::one_choice(2, 0.2);
        assert!(matches!(
            estimate_local_event(&spec, LocalEvent::EdgeBlue, 16, 4, 0, &r),
            Err(Error::BiasBound { .. })
        ));
        let spec = ModelSpec::independent(2, 0.9, 0.5);
        assert!(matches!(
            estimate_local_event(&spec, LocalEvent::PairCollinearDistance(0), 16, 4, 0, &r),
            Err(Error::InvalidEvent(_))
        ));
        assert!(estimate_local_event(&spec, LocalEvent::EdgeBlue, 16, 1, 0, &r).is_err());
    }

    #[test]
    fn full_occupancy_independent_pairs() {
        // At p = 1 every edge is its own segment.
        let r = Runner::new(2);
        let spec = ModelSpec::independent(2, 1.0, 0.5);
        let est = estimate_local_event(&spec, LocalEvent::PairCollinearDistance(1), 32, 20, 1, &r).unwrap();
        assert!(est.probability.within(0.25, 4.0));
        assert!(est.correlation.unwrap().within(0.0, 4.0));
    }

    #[test]
    fn thread_count_does_not_matter() {
        let spec = ModelSpec::one_choice(2, 0.6);
        let a = estimate_local_event(&spec, LocalEvent::PairPerp, 64, 8, 11, &Runner::new(1)).unwrap();
        let b = estimate_local_event(&spec, LocalEvent::PairPerp, 64, 8, 11, &Runner::new(4)).unwrap();
        assert_eq!(a, b);
    }
}

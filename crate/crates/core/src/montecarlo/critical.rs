use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::estimate::check_replicates;
use super::{wrapping_probability, CsvRow, EstimateWithCI, ModelSpec, Runner};
use crate::analytic::CriticalCurve;
use crate::error::check_unit;
use crate::lattice::Boundary;
use crate::models::ModelTag;
use crate::{Error, Result};

/// The parameter varied by a critical-point search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Vary {
    P,
    Lambda,
}

impl fmt::Display for Vary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Vary::P => "p",
            Vary::Lambda => "lambda",
        })
    }
}

impl std::str::FromStr for Vary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(Vary::P),
            "lambda" => Ok(Vary::Lambda),
            _ => Err(Error::InvalidEvent(format!("cannot vary {s:?}; use p or lambda"))),
        }
    }
}

impl Vary {
    fn apply(self, spec: &ModelSpec, x: f64) -> ModelSpec {
        match self {
            Vary::P => spec.with_p(x),
            Vary::Lambda => spec.with_lambda(x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub bracket: (f64, f64),
    pub lengths: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub target: f64,
    /// Final bisection width.
    pub tol: f64,
    /// Points in the coarse monotonicity scan, endpoints included.
    pub scan_points: usize,
}

impl SearchOptions {
    pub fn new(bracket: (f64, f64), lengths: Vec<usize>, replicates: usize, master_seed: u64) -> Self {
        Self {
            bracket,
            lengths,
            replicates,
            master_seed,
            target: 0.5,
            tol: 1e-3,
            scan_points: 9,
        }
    }
}

/// Crossing of the wrapping probability at one side length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    #[serde(rename = "L")]
    pub length: usize,
    pub value: f64,
    /// Coarse scan as `(x, wrap probability)`.
    pub scan: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalEstimate {
    pub parameter: Vary,
    /// Crossing at the largest side length.
    pub estimate: f64,
    /// Spread of the crossings across side lengths, at least the bisection
    /// width.
    pub ci_halfwidth: f64,
    pub lengths: Vec<usize>,
    pub target: f64,
    pub crossings: Vec<Crossing>,
}

fn crossing_at(
    spec: &ModelSpec,
    vary: Vary,
    length: usize,
    opts: &SearchOptions,
    runner: &Runner,
) -> Result<Crossing> {
    let (lo, hi) = opts.bracket;
    let n = opts.scan_points.max(2);
    let eval = |x: f64| {
        wrapping_probability(
            &vary.apply(spec, x),
            length,
            opts.replicates,
            opts.master_seed,
            runner,
        )
        .map(|e| e.wrap)
    };
    let xs: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let ws: Vec<EstimateWithCI> = xs.iter().map(|&x| eval(x)).collect::<Result<_>>()?;
    let scan: Vec<(f64, f64)> = xs.iter().zip(&ws).map(|(&x, w)| (x, w.mean)).collect();
    let (first, last) = (ws[0].mean, ws[n - 1].mean);
    let t = opts.target;
    if (first - t) * (last - t) >= 0.0 {
        return Err(Error::NoSignChange {
            what: format!("wrap probability - {t} at L = {length}"),
            lo: first - t,
            hi: last - t,
        });
    }
    let sign = if last > first { 1.0 } else { -1.0 };
    for i in 0..n - 1 {
        let step = sign * (ws[i + 1].mean - ws[i].mean);
        let noise = 3.0 * ws[i].stderr.hypot(ws[i + 1].stderr);
        if step < -noise - 1e-12 {
            return Err(Error::NonMonotone {
                length,
                detail: format!(
                    "wrap probability {} at {} then {} at {}",
                    ws[i].mean,
                    xs[i],
                    ws[i + 1].mean,
                    xs[i + 1]
                ),
            });
        }
    }
    // `above(x)`: the scan has passed the target at x.
    let above = |w: f64| sign * (w - t) >= 0.0;
    let k = ws.iter().position(|w| above(w.mean)).expect("sign change");
    let (mut a, mut b) = (xs[k - 1], xs[k]);
    while b - a > opts.tol {
        let mid = 0.5 * (a + b);
        if above(eval(mid)?.mean) {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok(Crossing {
        length,
        value: 0.5 * (a + b),
        scan,
    })
}

/// Locates where the wrapping probability crosses `target` as one
/// parameter varies.
///
/// Each side length gets a coarse scan, which must be monotone up to three
/// combined standard errors, followed by bisection. All evaluations share
/// the master seed, so neighbouring parameter values reuse their random
/// numbers.
pub fn critical_search(
    spec: &ModelSpec,
    vary: Vary,
    opts: &SearchOptions,
    runner: &Runner,
) -> Result<CriticalEstimate> {
    spec.validate()?;
    check_replicates(opts.replicates)?;
    check_unit("target", opts.target)?;
    let (lo, hi) = opts.bracket;
    if lo.partial_cmp(&hi) != Some(Ordering::Less)
        || opts.lengths.is_empty()
        || opts.tol.is_nan()
        || opts.tol <= 0.0
    {
        return Err(Error::Domain {
            name: "bracket",
            value: hi - lo,
            range: "lo < hi, nonempty L list, tol > 0",
        });
    }
    vary.apply(spec, lo).validate()?;
    vary.apply(spec, hi).validate()?;
    let mut lengths = opts.lengths.clone();
    lengths.sort_unstable();
    lengths.dedup();
    let crossings = lengths
        .iter()
        .map(|&l| crossing_at(spec, vary, l, opts, runner))
        .collect::<Result<Vec<_>>>()?;
    let values = crossings.iter().map(|c| c.value);
    let spread = values.clone().fold(f64::NEG_INFINITY, f64::max) - values.fold(f64::INFINITY, f64::min);
    Ok(CriticalEstimate {
        parameter: vary,
        estimate: crossings.last().expect("nonempty").value,
        ci_halfwidth: spread.max(opts.tol),
        lengths,
        target: opts.target,
        crossings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: f64,
    pub lambda: f64,
    pub wrap: EstimateWithCI,
    pub largest_fraction: EstimateWithCI,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub model: ModelTag,
    pub d: usize,
    #[serde(rename = "L")]
    pub length: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let row = |r: &SweepRow, metric: &str, e: &EstimateWithCI| CsvRow {
            model: self.model,
            d: self.d,
            length: self.length,
            boundary: Boundary::Torus,
            p: r.p,
            lambda: Some(r.lambda),
            metric: metric.into(),
            estimate: e.clone(),
        };
        self.rows
            .iter()
            .flat_map(|r| {
                [
                    row(r, "wrap_prob", &r.wrap),
                    row(r, "largest_fraction", &r.largest_fraction),
                ]
            })
            .collect()
    }

    pub fn get(&self, p: f64, lambda: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.p == p && r.lambda == lambda)
    }
}

fn check_grid(name: &'static str, grid: &[f64]) -> Result<()> {
    if grid.is_empty()
        || grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::Domain {
            name,
            value: grid.len() as f64,
            range: "nonempty, strictly increasing",
        });
    }
    Ok(())
}

/// Wrapping probability and largest-cluster fraction over a `(p, λ)` grid.
#[allow(clippy::too_many_arguments)]
pub fn frontier_sweep(
    model: ModelTag,
    d: usize,
    p_grid: &[f64],
    lambda_grid: &[f64],
    length: usize,
    replicates: usize,
    master_seed: u64,
    runner: &Runner,
) -> Result<SweepResult> {
    if !matches!(
        model,
        ModelTag::Independent | ModelTag::Mixed | ModelTag::MixedDerived
    ) {
        return Err(Error::InvalidEvent(format!(
            "sweep over lambda needs a lambda model, got {model}"
        )));
    }
    check_grid("p_grid", p_grid)?;
    check_grid("lambda_grid", lambda_grid)?;
    let mut rows = Vec::with_capacity(p_grid.len() * lambda_grid.len());
    for &p in p_grid {
        for &lambda in lambda_grid {
            let spec = ModelSpec {
                model,
                d,
                p,
                lambda: Some(lambda),
            };
            let e = wrapping_probability(&spec, length, replicates, master_seed, runner)?;
            rows.push(SweepRow {
                p,
                lambda,
                wrap: e.wrap,
                largest_fraction: e.largest_fraction,
            });
        }
    }
    Ok(SweepResult {
        model,
        d,
        length,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedCurvePoint {
    pub p: f64,
    /// Critical `λ`, or 1 when pinned.
    pub lambda_c: f64,
    pub ci_halfwidth: f64,
    /// No crossing: even `λ = 1` stays below the target at every `L`.
    pub pinned: bool,
    /// Wrapping probability at `λ = 1` for each side length.
    pub wrap_at_one: Vec<f64>,
    pub search: Option<CriticalEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedCurve {
    pub d: usize,
    pub lengths: Vec<usize>,
    pub replicates: usize,
    pub master_seed: u64,
    pub target: f64,
    pub points: Vec<MixedCurvePoint>,
}

impl MixedCurve {
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let length = self.lengths.iter().copied().max().unwrap_or(0);
        self.points
            .iter()
            .map(|pt| CsvRow {
                model: ModelTag::Mixed,
                d: self.d,
                length,
                boundary: Boundary::Torus,
                p: pt.p,
                lambda: None,
                metric: "lambda_c".into(),
                estimate: EstimateWithCI {
                    mean: pt.lambda_c,
                    stderr: pt.ci_halfwidth,
                    replicates: self.replicates,
                    master_seed: self.master_seed,
                    per_replicate: None,
                },
            })
            .collect()
    }

    pub fn to_critical_curve(&self) -> CriticalCurve {
        CriticalCurve {
            points: self.points.iter().map(|pt| (pt.p, pt.lambda_c)).collect(),
        }
    }

    pub fn get(&self, p: f64) -> Option<&MixedCurvePoint> {
        self.points.iter().find(|pt| pt.p == p)
    }
}

/// Empirical critical curve `λ̄_c(p)` of mixed site-bond percolation.
///
/// For each `p` the wrapping probability at `λ = 1` (site percolation) is
/// checked first; if it stays below the target at every side length the
/// point is reported as pinned at 1 and no search is run.
pub fn mixed_curve_estimate(
    d: usize,
    p_grid: &[f64],
    opts: &SearchOptions,
    runner: &Runner,
) -> Result<MixedCurve> {
    check_grid("p_grid", p_grid)?;
    let mut points = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let spec = ModelSpec::mixed(d, p, 1.0);
        let wrap_at_one = opts
            .lengths
            .iter()
            .map(|&l| {
                wrapping_probability(&spec, l, opts.replicates, opts.master_seed, runner).map(|e| e.wrap.mean)
            })
            .collect::<Result<Vec<_>>>()?;
        if wrap_at_one.iter().all(|&w| w < opts.target) {
            points.push(MixedCurvePoint {
                p,
                lambda_c: 1.0,
                ci_halfwidth: 0.0,
                pinned: true,
                wrap_at_one,
                search: None,
            });
            continue;
        }
        let est = critical_search(&spec, Vary::Lambda, opts, runner)?;
        points.push(MixedCurvePoint {
            p,
            lambda_c: est.estimate,
            ci_halfwidth: est.ci_halfwidth,
            pinned: false,
            wrap_at_one,
            search: Some(est),
        });
    }
    let mut lengths = opts.lengths.clone();
    lengths.sort_unstable();
    Ok(MixedCurve {
        d,
        lengths,
        replicates: opts.replicates,
        master_seed: opts.master_seed,
        target: opts.target,
        points,
    })
}

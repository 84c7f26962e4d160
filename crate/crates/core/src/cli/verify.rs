use std::fmt;
use std::fs;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::{CmdResult, VerifyArgs, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::analytic::{self, BlockParams};
use crate::lattice::{derive_seed, sample_sites, Boundary, Geometry, StreamRole};
use crate::models::ModelTag;
use crate::models::{
    corrupted_compass_turquoise, feasible_segments, independent_blue, one_choice_blue,
    restrict_independent_to_occupied_pairs,
};
use crate::montecarlo::{
    block_event_mc, estimate_local_event, truncated_sum_oracle, wrapping_probability, EstimateWithCI,
    LocalEvent, ModelSpec, Runner,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Formulas,
    Local,
    Compass,
    Coupling,
    Blocks,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::Formulas,
        Group::Local,
        Group::Compass,
        Group::Coupling,
        Group::Blocks,
    ];
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

/// Outcome of one check, printed as a JSON line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub group: Group,
    pub check: String,
    /// The statement being checked.
    pub anchor: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Report {
    group: Group,
    results: Vec<CheckResult>,
}

impl Report {
    fn push(&mut self, check: String, anchor: &str, value: f64, expected: f64, tolerance: f64) {
        self.results.push(CheckResult {
            group: self.group,
            check,
            anchor: anchor.to_string(),
            value,
            expected,
            tolerance,
            pass: (value - expected).abs() <= tolerance,
        });
    }

    fn statistical(&mut self, check: String, anchor: &str, est: &EstimateWithCI, expected: f64) {
        self.push(check, anchor, est.mean, expected, 4.0 * est.stderr);
    }
}

const L_LOCAL: usize = 128;
const LOCAL_REPLICATES: usize = 32;

fn formulas(r: &mut Report, seed: u64, runner: &Runner) -> Result<()> {
    let local = |spec: &ModelSpec, event, length| {
        estimate_local_event(spec, event, length, LOCAL_REPLICATES, seed, runner)
    };
    for &(d, p, length) in &[(2, 0.5, L_LOCAL), (2, 0.7, L_LOCAL), (3, 0.6, 48)] {
        let spec = ModelSpec::one_choice(d, p);
        let tag = format!("one-choice d={d} p={p}");
        let e = local(&spec, LocalEvent::EdgeBlue, length)?;
        r.statistical(
            format!("{tag} edge-blue"),
            "edge is blue with probability 1-(1-1/2d)^2",
            &e.probability,
            analytic::lambda_one_choice(d)?,
        );
        let e = local(&spec, LocalEvent::VertexBlue, length)?;
        r.statistical(
            format!("{tag} vertex-blue"),
            "site is blue with probability p+(1-p)(1-(1-λ)^d)",
            &e.probability,
            analytic::vertex_blue_prob_one_choice(d, p)?,
        );
        let e = local(&spec, LocalEvent::PairCollinear, length)?;
        r.statistical(
            format!("{tag} pair-collinear"),
            "opposite edges at a site both blue with probability 1-(1+p/d)(1-λ)",
            &e.probability,
            analytic::collinear_pair_prob_one_choice(d, p)?,
        );
        let e = local(&spec, LocalEvent::PairPerp, length)?;
        r.statistical(
            format!("{tag} pair-perp"),
            "perpendicular edges at a site both blue with probability λ²-p(2d-1)²/(2d)⁴",
            &e.probability,
            analytic::perp_pair_prob_one_choice(d, p)?,
        );
    }
    for &(p, lambda) in &[(0.6, 0.4), (0.9, 0.25)] {
        let spec = ModelSpec::independent(2, p, lambda);
        let tag = format!("independent d=2 p={p} lambda={lambda}");
        let e = local(&spec, LocalEvent::EdgeBlue, L_LOCAL)?;
        r.statistical(
            format!("{tag} edge-blue"),
            "edge is blue with probability λ",
            &e.probability,
            lambda,
        );
        let e = local(&spec, LocalEvent::VertexBlue, L_LOCAL)?;
        r.statistical(
            format!("{tag} vertex-blue"),
            "site is blue with probability 1-(1-λ)^d+p((1-λ)^d-(1-λ)^2d)",
            &e.probability,
            analytic::vertex_blue_prob_independent(2, p, lambda)?,
        );
    }
    for k in 1..=3 {
        let p = 0.5;
        let e = local(
            &ModelSpec::independent(2, p, 0.5),
            LocalEvent::PairCollinearDistance(k),
            L_LOCAL,
        )?;
        let corr = e
            .correlation
            .ok_or_else(|| Error::InvalidEvent("degenerate correlation".into()))?;
        r.statistical(
            format!("independent d=2 p={p} correlation k={k}"),
            "collinear edges with k sites between have correlation (1-p)^k",
            &corr,
            analytic::collinear_corr_independent(p, k)?,
        );
    }
    Ok(())
}

fn local(r: &mut Report) -> Result<()> {
    const K: usize = 60;
    for d in [2, 3] {
        for p in [0.4, 0.6, 0.8] {
            let spec = ModelSpec::one_choice(d, p);
            let cases = [
                (LocalEvent::EdgeBlue, analytic::lambda_one_choice(d)?),
                (
                    LocalEvent::VertexBlue,
                    analytic::vertex_blue_prob_one_choice(d, p)?,
                ),
                (
                    LocalEvent::PairCollinear,
                    analytic::collinear_pair_prob_one_choice(d, p)?,
                ),
                (LocalEvent::PairPerp, analytic::perp_pair_prob_one_choice(d, p)?),
            ];
            for (event, closed) in cases {
                let o = truncated_sum_oracle(&spec, event, K)?;
                r.push(
                    format!("one-choice d={d} p={p} {event}"),
                    "configuration sum agrees with the closed form",
                    o.value,
                    closed,
                    o.tail_bound + 1e-13,
                );
            }
            let lambda = 0.5;
            let spec = ModelSpec::independent(d, p, lambda);
            let o = truncated_sum_oracle(&spec, LocalEvent::VertexBlue, K)?;
            r.push(
                format!("independent d={d} p={p} lambda={lambda} vertex-blue"),
                "configuration sum agrees with the closed form",
                o.value,
                analytic::vertex_blue_prob_independent(d, p, lambda)?,
                o.tail_bound + 1e-13,
            );
            let o = truncated_sum_oracle(&spec, LocalEvent::PairCollinearDistance(2), K)?;
            let corr = analytic::collinear_corr_independent(p, 2)?;
            r.push(
                format!("independent d={d} p={p} lambda={lambda} pair-distance:2"),
                "joint probability λ²+(1-p)^k λ(1-λ)",
                o.value,
                lambda * lambda + corr * lambda * (1.0 - lambda),
                o.tail_bound + 1e-13,
            );
        }
    }
    Ok(())
}

/// Edges of `inner` missing from `outer` over a batch of samples; with
/// `fault`, one edge of `inner` is dropped from `outer` in the first sample.
fn inclusion_violations(d: usize, p: f64, seed: u64, fault: bool, compass: bool) -> Result<usize> {
    let side = if d == 2 { 24 } else { 10 };
    let g = Geometry::cube(d, side, Boundary::Torus)?;
    let mut violations = 0;
    for rep in 0..8u64 {
        let config = sample_sites(&g, p, derive_seed(seed, rep, StreamRole::Sites))?;
        let segs = feasible_segments(&config);
        let (inner, mut outer) = if compass {
            let (choices, blue) =
                one_choice_blue(&config, &segs, derive_seed(seed, rep, StreamRole::Choices));
            (blue, corrupted_compass_turquoise(&config, &choices))
        } else {
            let blue = independent_blue(&config, &segs, 0.6, derive_seed(seed, rep, StreamRole::Colors))?;
            (restrict_independent_to_occupied_pairs(&config, &blue), blue)
        };
        if fault && rep == 0 {
            if let Some(e) = inner.edges().next() {
                outer.clear(e);
            }
        }
        violations += inner.difference(&outer).len();
    }
    Ok(violations)
}

fn compass(r: &mut Report, seed: u64, fault: bool) -> Result<()> {
    for d in 2..=4 {
        let want = (2 * d - 1) as f64 / (2 * d) as f64;
        r.push(
            format!("spectral radius d={d} p=1"),
            "at p=1 the mean matrix has eigenvalues (2d-1)/2d and 0",
            analytic::compass_spectral_radius(d, 1.0)?,
            want,
            1e-8,
        );
    }
    for d in [2, 3] {
        let t = analytic::compass_threshold(d)?;
        r.push(
            format!("threshold d={d}"),
            "spectral radius equals 1 at the threshold",
            t.radius,
            1.0,
            1e-6,
        );
    }
    for d in [2, 3] {
        for p in [0.2, 0.5, 0.8] {
            r.push(
                format!("blue within turquoise d={d} p={p}"),
                "blue edges are contained in the corrupted-compass edges",
                inclusion_violations(d, p, seed, fault, true)? as f64,
                0.0,
                0.0,
            );
        }
    }
    Ok(())
}

fn coupling(r: &mut Report, seed: u64, fault: bool, runner: &Runner) -> Result<()> {
    for d in [2, 3] {
        for p in [0.2, 0.5, 0.8] {
            r.push(
                format!("occupied-pair edges within blue d={d} p={p}"),
                "blue unit edges between occupied sites are blue",
                inclusion_violations(d, p, seed, fault, false)? as f64,
                0.0,
                0.0,
            );
        }
    }
    let (p, lambda) = (0.8, 0.7);
    let derived = ModelSpec {
        model: ModelTag::MixedDerived,
        ..ModelSpec::independent(2, p, lambda)
    };
    let e = estimate_local_event(&derived, LocalEvent::EdgeBlue, 64, LOCAL_REPLICATES, seed, runner)?;
    r.statistical(
        format!("occupied-pair edge density p={p} lambda={lambda}"),
        "edge open with probability λp² in mixed percolation",
        &e.probability,
        lambda * p * p,
    );
    let a = wrapping_probability(&derived, 32, 400, seed, runner)?;
    let b = wrapping_probability(
        &ModelSpec::mixed(2, p, lambda),
        32,
        400,
        seed.wrapping_add(1),
        runner,
    )?;
    r.push(
        format!("occupied-pair vs mixed wrap probability p={p} lambda={lambda}"),
        "occupied-pair edges have the law of mixed percolation",
        a.wrap.mean,
        b.wrap.mean,
        4.0 * a.wrap.stderr.hypot(b.wrap.stderr),
    );
    Ok(())
}

fn blocks(r: &mut Report, seed: u64, runner: &Runner) -> Result<()> {
    let bp = BlockParams::from_q(1, 0.5, 7.0 / 16.0)?;
    let mc = block_event_mc(&bp, 20_000, seed, runner)?;
    r.statistical(
        "A r=1 q=0.5 lambda=7/16".into(),
        "vertical crossing of the block face",
        &mc.a,
        analytic::block_event_a_prob(&bp),
    );
    let bp = BlockParams::from_q(3, 2f64.powf(-1.0 / 3.0), 0.5)?;
    let mc = block_event_mc(&bp, 20_000, seed, runner)?;
    let c = mc.c.expect("r is a multiple of 3");
    r.statistical(
        "C r=3 q=2^(-1/3) lambda=0.5".into(),
        "horizontal link between neighbouring blocks",
        &c,
        analytic::block_event_c_prob(&bp)?,
    );
    Ok(())
}

/// Runs the selected groups in a fixed order.
pub fn run_checks(
    groups: &[Group],
    fault: Option<Group>,
    seed: u64,
    runner: &Runner,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &group in Group::ALL.iter().filter(|g| groups.contains(g)) {
        let mut r = Report {
            group,
            results: Vec::new(),
        };
        let faulty = fault == Some(Group::Coupling);
        match group {
            Group::Formulas => formulas(&mut r, seed, runner)?,
            Group::Local => local(&mut r)?,
            Group::Compass => compass(&mut r, seed, faulty)?,
            Group::Coupling => coupling(&mut r, seed, faulty, runner)?,
            Group::Blocks => blocks(&mut r, seed, runner)?,
        }
        out.extend(r.results);
    }
    Ok(out)
}

pub fn cmd_verify(a: &VerifyArgs, runner: &Runner) -> CmdResult {
    let groups: Vec<Group> = match a.only {
        Some(g) => vec![g],
        None => Group::ALL.to_vec(),
    };
    let results = run_checks(&groups, a.inject_fault, a.seed, runner)?;
    let mut text = String::new();
    for c in &results {
        text.push_str(&serde_json::to_string(c).map_err(Error::from)?);
        text.push('\n');
    }
    print!("{text}");
    if let Some(path) = &a.out {
        fs::write(path, &text).map_err(Error::from)?;
    }
    let failed = results.iter().filter(|c| !c.pass).count();
    eprintln!("{} checks, {} failed", results.len(), failed);
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

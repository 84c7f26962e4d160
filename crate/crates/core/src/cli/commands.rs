use std::fs;
use std::path::Path;

use serde::Serialize;

use super::{
    BlockArgs, CmdResult, CriticalArgs, EstimateArgs, Failure, MixedCurveArgs, SampleArgs, SweepArgs,
    WrapArgs, EXIT_OK,
};
use crate::analytic::{block_event_a_prob, block_event_c_prob, block_r, BlockParams};
use crate::lattice::{
    bias_bound, derive_seed, make_geometry, sample_sites, Boundary, StreamRole, BIAS_LIMIT,
};
use crate::models::{
    corrupted_compass_turquoise, feasible_segments, independent_blue, mixed_percolation, one_choice_blue,
    restrict_independent_to_occupied_pairs, ChoiceAssignment, ModelTag,
};
use crate::montecarlo::{
    block_event_mc, critical_search, estimate_local_event, frontier_sweep, mixed_curve_estimate, to_csv,
    wrapping_probability, CsvRow, EstimateWithCI, ModelSpec, Runner, SearchOptions, Vary,
};
use crate::{Error, Result};

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

/// Writes the CSV to `out` or standard output, and the JSON mirror if asked.
fn emit(rows: Vec<CsvRow>, out: Option<&Path>, json: Option<&Path>, full: bool) -> Result<()> {
    let rows: Vec<CsvRow> = rows
        .into_iter()
        .map(|mut r| {
            if !full {
                r.estimate.per_replicate = None;
            }
            r
        })
        .collect();
    let csv = to_csv(&rows);
    match out {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(p) = json {
        write(p, &(serde_json::to_string_pretty(&rows)? + "\n"))?;
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    if let Some(p) = path {
        write(p, &(serde_json::to_string_pretty(value)? + "\n"))?;
    }
    Ok(())
}

fn warn_bias(spec: &ModelSpec, length: usize) {
    if spec.uses_segments() {
        let b = bias_bound(spec.p, length);
        if b >= BIAS_LIMIT {
            eprintln!(
                "warning: (1-p)^(L-2) = {b:e} at p = {}, L = {length}; long segments may wrap the torus",
                spec.p
            );
        }
    }
}

fn row(spec: &ModelSpec, length: usize, metric: &str, estimate: EstimateWithCI) -> CsvRow {
    CsvRow {
        model: spec.model,
        d: spec.d,
        length,
        boundary: Boundary::Torus,
        p: spec.p,
        lambda: spec.lambda,
        metric: metric.into(),
        estimate,
    }
}

pub fn sample(a: &SampleArgs) -> CmdResult {
    let spec = ModelSpec {
        model: a.model,
        d: a.d,
        p: a.p,
        lambda: a.lambda,
    };
    spec.validate()?;
    let lengths = if a.lengths.len() == 1 {
        vec![a.lengths[0]; a.d]
    } else {
        a.lengths.clone()
    };
    let g = make_geometry(a.d, &lengths, a.boundary)?;
    let site_seed = derive_seed(a.seed, 0, StreamRole::Sites);
    let color_seed = derive_seed(a.seed, 0, StreamRole::Colors);
    let choice_seed = derive_seed(a.seed, 0, StreamRole::Choices);
    let config = sample_sites(&g, a.p, site_seed)?;
    let lambda = a.lambda.unwrap_or(0.0);
    let blue = match a.model {
        ModelTag::OneChoice => one_choice_blue(&config, &feasible_segments(&config), choice_seed).1,
        ModelTag::Turquoise => {
            corrupted_compass_turquoise(&config, &ChoiceAssignment::draw(&config, choice_seed))
        }
        ModelTag::Independent => independent_blue(&config, &feasible_segments(&config), lambda, color_seed)?,
        ModelTag::MixedDerived => {
            let b = independent_blue(&config, &feasible_segments(&config), lambda, color_seed)?;
            restrict_independent_to_occupied_pairs(&config, &b)
        }
        ModelTag::Mixed => mixed_percolation(&config, lambda, color_seed)?,
    };
    fs::create_dir_all(&a.out).map_err(Error::from)?;
    write(&a.out.join("sites.json"), &(config.to_json()? + "\n"))?;
    write(&a.out.join("edges.json"), &(blue.to_json()? + "\n"))?;
    eprintln!(
        "{} occupied sites, {} blue edges in {}",
        config.occupied_count(),
        blue.count(),
        a.out.display()
    );
    Ok(EXIT_OK)
}

pub fn estimate(a: &EstimateArgs, runner: &Runner) -> CmdResult {
    let spec = ModelSpec {
        model: a.model,
        d: a.d,
        p: a.p,
        lambda: a.lambda,
    };
    let est = estimate_local_event(&spec, a.event, a.length, a.replicates, a.seed, runner)?;
    let mut rows = vec![row(&spec, a.length, &a.event.to_string(), est.probability)];
    if let Some(c) = est.correlation {
        rows.push(row(&spec, a.length, "correlation", c));
    }
    emit(rows, a.out.as_deref(), a.json.as_deref(), a.full)?;
    Ok(EXIT_OK)
}

pub fn wrap(a: &WrapArgs, runner: &Runner) -> CmdResult {
    let spec = ModelSpec {
        model: a.model,
        d: a.d,
        p: a.p,
        lambda: a.lambda,
    };
    spec.validate()?;
    warn_bias(&spec, a.length);
    let est = wrapping_probability(&spec, a.length, a.replicates, a.seed, runner)?;
    let rows = vec![
        row(&spec, a.length, "wrap_prob", est.wrap),
        row(&spec, a.length, "largest_fraction", est.largest_fraction),
    ];
    emit(rows, a.out.as_deref(), a.json.as_deref(), a.full)?;
    Ok(EXIT_OK)
}

pub fn critical(a: &CriticalArgs, runner: &Runner) -> CmdResult {
    let (p, lambda) = match a.vary {
        Vary::P => (0.5, a.lambda),
        Vary::Lambda => (
            a.p.ok_or_else(|| Failure::usage("--p is required when varying lambda"))?,
            Some(0.5),
        ),
    };
    let spec = ModelSpec {
        model: a.model,
        d: a.d,
        p,
        lambda,
    };
    let bracket = match a.bracket.as_deref() {
        None if a.vary == Vary::P => (0.3, 0.95),
        None => (0.0, 1.0),
        Some([lo, hi]) => (*lo, *hi),
        Some(_) => return Err(Failure::usage("--bracket takes two values lo,hi")),
    };
    let opts = SearchOptions {
        target: a.target,
        tol: a.tol,
        scan_points: a.scan_points,
        ..SearchOptions::new(bracket, a.lengths.clone(), a.replicates, a.seed)
    };
    let est = critical_search(&spec, a.vary, &opts, runner)?;
    let rows = est
        .crossings
        .iter()
        .map(|c| {
            let mut r = row(
                &spec,
                c.length,
                &format!("critical_{}", a.vary),
                EstimateWithCI {
                    mean: c.value,
                    stderr: est.ci_halfwidth,
                    replicates: a.replicates,
                    master_seed: a.seed,
                    per_replicate: None,
                },
            );
            match a.vary {
                Vary::P => r.p = c.value,
                Vary::Lambda => r.lambda = Some(c.value),
            }
            r
        })
        .collect();
    emit(rows, a.out.as_deref(), None, false)?;
    emit_json(&est, a.json.as_deref())?;
    eprintln!("{} crossing: {} ± {}", a.vary, est.estimate, est.ci_halfwidth);
    Ok(EXIT_OK)
}

pub fn sweep(a: &SweepArgs, runner: &Runner) -> CmdResult {
    let res = frontier_sweep(
        a.model,
        a.d,
        &a.p_grid,
        &a.lambda_grid,
        a.length,
        a.replicates,
        a.seed,
        runner,
    )?;
    emit(res.csv_rows(), a.out.as_deref(), a.json.as_deref(), a.full)?;
    Ok(EXIT_OK)
}

pub fn mixed_curve(a: &MixedCurveArgs, runner: &Runner) -> CmdResult {
    let opts = SearchOptions {
        target: a.target,
        tol: a.tol,
        ..SearchOptions::new((0.0, 1.0), a.lengths.clone(), a.replicates, a.seed)
    };
    let curve = mixed_curve_estimate(a.d, &a.p_grid, &opts, runner)?;
    emit(curve.csv_rows(), a.out.as_deref(), None, false)?;
    emit_json(&curve, a.json.as_deref())?;
    for pt in &curve.points {
        if pt.pinned {
            eprintln!("p = {}: pinned at 1", pt.p);
        }
    }
    Ok(EXIT_OK)
}

pub fn blockcheck(a: &BlockArgs, runner: &Runner) -> CmdResult {
    let q = match (a.q, a.p) {
        (Some(q), None) => q,
        (None, Some(p)) => 1.0 - p,
        _ => return Err(Failure::usage("give exactly one of --q and --p")),
    };
    let r = match a.r {
        Some(r) => r,
        None => block_r(1.0 - q)?,
    };
    let bp = BlockParams::from_q(r, q, a.lambda)?;
    let mc = block_event_mc(&bp, a.replicates, a.seed, runner)?;
    let mut table = vec![("A", block_event_a_prob(&bp), mc.a.clone())];
    if let Some(c) = &mc.c {
        table.push(("C", block_event_c_prob(&bp)?, c.clone()));
    }
    println!("event,r,q,lambda,formula,mc,stderr,z");
    for (name, f, e) in &table {
        println!(
            "{name},{r},{q},{},{f},{},{},{}",
            a.lambda,
            e.mean,
            e.stderr,
            e.z_score(*f)
        );
    }
    if let Some(out) = &a.out {
        let rows: Vec<CsvRow> = table
            .into_iter()
            .map(|(name, _, e)| CsvRow {
                model: ModelTag::Independent,
                d: 2,
                length: 8 * r,
                boundary: Boundary::Free,
                p: 1.0 - q,
                lambda: Some(a.lambda),
                metric: format!("block_{}", name.to_lowercase()),
                estimate: e.without_values(),
            })
            .collect();
        write(out, &to_csv(&rows))?;
    }
    Ok(EXIT_OK)
}

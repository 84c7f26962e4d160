use serde::{Deserialize, Serialize};

use super::estimate::check_replicates;
use super::{EstimateWithCI, Runner};
use crate::analytic::BlockParams;
use crate::lattice::{derive_seed, make_geometry, sample_sites, Boundary, Direction, Geometry, StreamRole};
use crate::models::{feasible_segments, independent_blue, BlueEdgeSet, SegmentSet};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEstimates {
    pub a: EstimateWithCI,
    /// Present when `r` is a multiple of 3.
    pub c: Option<EstimateWithCI>,
}

/// Block coordinates are centred at the origin of the block; the window is
/// the free box `[-r, 7r) × [-4r, 4r)`.
struct Window {
    r: i64,
    g: Geometry,
}

impl Window {
    fn site(&self, x: i64, y: i64) -> usize {
        let (wx, wy) = (x + self.r, y + 4 * self.r);
        self.g.index(&[wx as usize, wy as usize]).expect("inside window")
    }

    fn x(&self, site: usize) -> i64 {
        self.g.coord(site, 0) as i64 - self.r
    }

    fn y(&self, site: usize) -> i64 {
        self.g.coord(site, 1) as i64 - 4 * self.r
    }
}

/// Some column `x ∈ [r, 2r)` holds a blue vertical segment from
/// `y ∈ [-3r+1, -2r]` to `y ∈ [2r, 3r-1]`.
fn event_a(w: &Window, segs: &SegmentSet, blue: &BlueEdgeSet, occupied: impl Fn(usize) -> bool) -> bool {
    let r = w.r;
    (r..2 * r).any(|x| {
        (-3 * r + 1..=-2 * r).any(|y| {
            let a = w.site(x, y);
            if !occupied(a) {
                return false;
            }
            let Some(id) = segs.toward(a, Direction::new(1, true)) else {
                return false;
            };
            let top = w.y(segs.get(id).b);
            (2 * r..3 * r).contains(&top) && blue.is_blue(w.g.edge(a, 1).expect("interior"))
        })
    })
}

/// Some row `y ∈ [-r/3, r/3)` holds a blue horizontal segment from
/// `x ∈ (r/3, r]` to `x ∈ [5r, 17r/3)`.
fn event_c(w: &Window, segs: &SegmentSet, blue: &BlueEdgeSet, occupied: impl Fn(usize) -> bool) -> bool {
    let r = w.r;
    let t = r / 3;
    (-t..t).any(|y| {
        (t + 1..=r).any(|x| {
            let a = w.site(x, y);
            if !occupied(a) {
                return false;
            }
            let Some(id) = segs.toward(a, Direction::new(0, true)) else {
                return false;
            };
            let right = w.x(segs.get(id).b);
            (5 * r..6 * r - t).contains(&right) && blue.is_blue(w.g.edge(a, 0).expect("interior"))
        })
    })
}

/// Monte Carlo frequencies of the block crossing events under the
/// independent model, evaluated from their literal definitions.
pub fn block_event_mc(
    bp: &BlockParams,
    replicates: usize,
    master_seed: u64,
    runner: &Runner,
) -> Result<BlockEstimates> {
    check_replicates(replicates)?;
    let r = bp.r;
    let w = Window {
        r: r as i64,
        g: make_geometry(2, &[8 * r, 8 * r], Boundary::Free)?,
    };
    let with_c = r.is_multiple_of(3);
    let p = 1.0 - bp.q;
    let values = runner
        .map(replicates, |rep| {
            let rep = rep as u64;
            let config = sample_sites(&w.g, p, derive_seed(master_seed, rep, StreamRole::Sites))?;
            let segs = feasible_segments(&config);
            let blue = independent_blue(
                &config,
                &segs,
                bp.lambda,
                derive_seed(master_seed, rep, StreamRole::Colors),
            )?;
            let occ = |s| config.is_occupied(s);
            let a = event_a(&w, &segs, &blue, occ);
            let c = with_c && event_c(&w, &segs, &blue, occ);
            Ok((f64::from(u8::from(a)), f64::from(u8::from(c))))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let a = EstimateWithCI::from_values(values.iter().map(|v| v.0).collect(), master_seed)?;
    let c = with_c
        .then(|| EstimateWithCI::from_values(values.iter().map(|v| v.1).collect(), master_seed))
        .transpose()?;
    Ok(BlockEstimates { a, c })
}

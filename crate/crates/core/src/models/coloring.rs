use rand::Rng;

use super::{BlueEdgeSet, ModelParams, ModelTag, Seeds, SegmentSet};
use crate::error::check_unit;
use crate::lattice::{next_occupied, Direction, RngStream, SiteConfig, StreamRole};
use crate::Result;

/// The direction chosen by each occupied site under the one-choice rule.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiceAssignment {
    chosen: Vec<Option<Direction>>,
    pub choice_seed: u64,
}

impl ChoiceAssignment {
    /// Uniform draw over the `2d` directions.
    ///
    /// A direction is drawn for every site in index order and kept only on
    /// occupied sites, so a site's choice does not depend on the occupancy
    /// of the others.
    pub fn draw(config: &SiteConfig, choice_seed: u64) -> Self {
        let g = config.geometry();
        let dirs = 2 * g.dim();
        let mut rng = RngStream::new(choice_seed, StreamRole::Choices as u64).rng();
        let chosen = (0..g.site_count())
            .map(|s| {
                let i = rng.gen_range(0..dirs);
                config.is_occupied(s).then(|| Direction::from_index(i))
            })
            .collect();
        Self { chosen, choice_seed }
    }

    /// Explicit choices; entries must be `Some` exactly on occupied sites.
    pub fn from_choices(chosen: Vec<Option<Direction>>, choice_seed: u64) -> Self {
        Self { chosen, choice_seed }
    }

    pub fn get(&self, site: usize) -> Option<Direction> {
        self.chosen[site]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Direction)> + '_ {
        self.chosen
            .iter()
            .enumerate()
            .filter_map(|(s, c)| c.map(|d| (s, d)))
    }
}

fn paint(config: &SiteConfig, segments: &SegmentSet, blue_segments: &[bool], out: &mut BlueEdgeSet) {
    let g = config.geometry();
    for (seg, _) in segments.segments().iter().zip(blue_segments).filter(|(_, &b)| b) {
        for e in seg.edges(g) {
            out.set(e);
        }
    }
}

/// One-choice colouring: every occupied site declares the segment along its
/// chosen direction green; a segment is blue iff some endpoint declared it.
pub fn one_choice_blue(
    config: &SiteConfig,
    segments: &SegmentSet,
    choice_seed: u64,
) -> (ChoiceAssignment, BlueEdgeSet) {
    let choices = ChoiceAssignment::draw(config, choice_seed);
    let blue = one_choice_blue_from(config, segments, &choices);
    (choices, blue)
}

/// One-choice colouring from a given assignment.
pub fn one_choice_blue_from(
    config: &SiteConfig,
    segments: &SegmentSet,
    choices: &ChoiceAssignment,
) -> BlueEdgeSet {
    let mut green = vec![false; segments.len()];
    for (site, dir) in choices.iter() {
        if let Some(id) = segments.toward(site, dir) {
            green[id] = true;
        }
    }
    let mut out = BlueEdgeSet::empty(
        config.geometry(),
        ModelTag::OneChoice,
        ModelParams {
            p: config.p(),
            lambda: None,
        },
        Seeds {
            site_seed: config.site_seed(),
            color_seed: Some(choices.choice_seed),
        },
    );
    paint(config, segments, &green, &mut out);
    out
}

/// Independent colouring: each feasible segment is blue with probability `λ`.
///
/// The coin of a segment is the uniform in slot `a·d + axis` of the colour
/// stream, so for fixed seeds the blue set grows monotonically with `λ`.
pub fn independent_blue(
    config: &SiteConfig,
    segments: &SegmentSet,
    lambda: f64,
    color_seed: u64,
) -> Result<BlueEdgeSet> {
    check_unit("lambda", lambda)?;
    let g = config.geometry();
    let d = g.dim();
    let coins = uniforms(g.edge_slots(), color_seed);
    let blue: Vec<bool> = segments
        .segments()
        .iter()
        .map(|s| coins[s.a * d + s.axis] < lambda)
        .collect();
    let mut out = BlueEdgeSet::empty(
        g,
        ModelTag::Independent,
        ModelParams {
            p: config.p(),
            lambda: Some(lambda),
        },
        Seeds {
            site_seed: config.site_seed(),
            color_seed: Some(color_seed),
        },
    );
    paint(config, segments, &blue, &mut out);
    Ok(out)
}

/// Corrupted-compass edges coupled to a one-choice assignment.
///
/// Edge `(u, v)` is turquoise iff an endpoint is unoccupied, or an occupied
/// endpoint `x` has the edge inside its green segment. Only edges incident
/// to `x` qualify, so this is the edge toward the chosen direction, plus the
/// opposite edge when the green segment is a full cycle.
pub fn corrupted_compass_turquoise(config: &SiteConfig, choices: &ChoiceAssignment) -> BlueEdgeSet {
    let g = config.geometry();
    let mut out = BlueEdgeSet::empty(
        g,
        ModelTag::Turquoise,
        ModelParams {
            p: config.p(),
            lambda: None,
        },
        Seeds {
            site_seed: config.site_seed(),
            color_seed: Some(choices.choice_seed),
        },
    );
    for site in 0..g.site_count() {
        match choices.get(site) {
            None => {
                for dir in g.directions() {
                    if let Some(e) = g.edge_toward(site, dir) {
                        out.set(e);
                    }
                }
            }
            Some(dir) => {
                let (hit, _) = next_occupied(config, site, dir).expect("site in range");
                match hit {
                    Some(_) => {
                        if let Some(e) = g.edge_toward(site, dir) {
                            out.set(e);
                        }
                    }
                    // Alone on a torus line: the green segment is the full cycle.
                    None if g.is_torus() => {
                        for e in [dir, dir.negate()].iter().filter_map(|&u| g.edge_toward(site, u)) {
                            out.set(e);
                        }
                    }
                    // The segment leaves the free box and was dropped.
                    None => {}
                }
            }
        }
    }
    out
}

/// Mixed site-bond percolation: an edge is open iff both endpoints are
/// occupied and its own Bernoulli(`λ`) coin succeeds.
pub fn mixed_percolation(config: &SiteConfig, lambda: f64, color_seed: u64) -> Result<BlueEdgeSet> {
    check_unit("lambda", lambda)?;
    let g = config.geometry();
    let coins = uniforms(g.edge_slots(), color_seed);
    let mut out = BlueEdgeSet::empty(
        g,
        ModelTag::Mixed,
        ModelParams {
            p: config.p(),
            lambda: Some(lambda),
        },
        Seeds {
            site_seed: config.site_seed(),
            color_seed: Some(color_seed),
        },
    );
    for (e, &u) in coins.iter().enumerate() {
        if u >= lambda {
            continue;
        }
        if let Some((a, b)) = g.edge_endpoints(e) {
            if config.is_occupied(a) && config.is_occupied(b) {
                out.set(e);
            }
        }
    }
    Ok(out)
}

/// Blue edges of an independent-model sample whose endpoints are both
/// occupied. Such an edge is a feasible segment of length one.
pub fn restrict_independent_to_occupied_pairs(config: &SiteConfig, blue: &BlueEdgeSet) -> BlueEdgeSet {
    let g = config.geometry();
    let mut out = BlueEdgeSet::empty(g, ModelTag::MixedDerived, blue.params, blue.seeds);
    for e in blue.edges() {
        if let Some((a, b)) = g.edge_endpoints(e) {
            if config.is_occupied(a) && config.is_occupied(b) {
                out.set(e);
            }
        }
    }
    out
}

fn uniforms(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, StreamRole::Colors as u64).rng();
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{make_geometry, sample_sites, Boundary, Geometry};
    use crate::models::feasible_segments;

    fn single_site(l: usize, site: usize) -> SiteConfig {
        let g = Geometry::cube(2, l, Boundary::Torus).unwrap();
        let mut occ = vec![false; g.site_count()];
        occ[site] = true;
        SiteConfig::from_occupancy(&g, &occ, 0.5).unwrap()
    }

    #[test]
    fn lone_site_paints_one_cycle() {
        let c = single_site(6, 14);
        let segs = feasible_segments(&c);
        for seed in 0..8 {
            let (choices, blue) = one_choice_blue(&c, &segs, seed);
            let axis = choices.get(14).unwrap().axis;
            assert_eq!(blue.count(), 6);
            let g = c.geometry();
            for e in blue.edges() {
                assert_eq!(e % 2, axis);
                let (u, _) = g.edge_endpoints(e).unwrap();
                let other = 1 - axis;
                assert_eq!(g.coord(u, other), g.coord(14, other));
            }
        }
    }

    #[test]
    fn independent_extremes() {
        let g = Geometry::cube(2, 16, Boundary::Torus).unwrap();
        let c = sample_sites(&g, 0.6, 4).unwrap();
        let segs = feasible_segments(&c);
        assert!(independent_blue(&c, &segs, 0.0, 1).unwrap().is_empty());
        let all = independent_blue(&c, &segs, 1.0, 1).unwrap();
        let covered: usize = segs.segments().iter().map(|s| s.edge_len()).sum();
        assert_eq!(all.count(), covered);
        assert!(independent_blue(&c, &segs, 1.1, 1).is_err());
        assert!(mixed_percolation(&c, -0.1, 1).is_err());
    }

    #[test]
    fn independent_is_monotone_in_lambda() {
        let g = Geometry::cube(2, 16, Boundary::Torus).unwrap();
        let c = sample_sites(&g, 0.5, 8).unwrap();
        let segs = feasible_segments(&c);
        let lo = independent_blue(&c, &segs, 0.3, 5).unwrap();
        let hi = independent_blue(&c, &segs, 0.6, 5).unwrap();
        assert!(lo.is_subset_of(&hi));
    }

    #[test]
    fn turquoise_at_full_occupancy_is_the_chosen_edges() {
        let g = Geometry::cube(2, 8, Boundary::Torus).unwrap();
        let c = sample_sites(&g, 1.0, 0).unwrap();
        let segs = feasible_segments(&c);
        let (choices, blue) = one_choice_blue(&c, &segs, 3);
        let t = corrupted_compass_turquoise(&c, &choices);
        let chosen: std::collections::BTreeSet<usize> = choices
            .iter()
            .map(|(s, dir)| g.edge_toward(s, dir).unwrap())
            .collect();
        assert_eq!(t.edges().collect::<std::collections::BTreeSet<_>>(), chosen);
        assert_eq!(t, {
            let mut b = blue.clone();
            b.model = ModelTag::Turquoise;
            b
        });
    }

    #[test]
    fn turquoise_on_empty_window_is_everything() {
        let g = Geometry::cube(2, 6, Boundary::Torus).unwrap();
        let c = SiteConfig::from_occupancy(&g, &[false; 36], 0.01).unwrap();
        let choices = ChoiceAssignment::draw(&c, 1);
        let t = corrupted_compass_turquoise(&c, &choices);
        assert_eq!(t.count(), g.edge_count());
    }

    #[test]
    fn restriction_keeps_occupied_pairs_only() {
        let g = make_geometry(2, &[12, 10], Boundary::Torus).unwrap();
        let full = sample_sites(&g, 1.0, 1).unwrap();
        let segs = feasible_segments(&full);
        let blue = independent_blue(&full, &segs, 0.4, 2).unwrap();
        let kept = restrict_independent_to_occupied_pairs(&full, &blue);
        assert_eq!(kept.bits(), blue.bits());

        let c = sample_sites(&g, 0.5, 3).unwrap();
        let segs = feasible_segments(&c);
        let blue = independent_blue(&c, &segs, 0.7, 2).unwrap();
        let kept = restrict_independent_to_occupied_pairs(&c, &blue);
        assert!(kept.is_subset_of(&blue));
        for e in kept.edges() {
            let (a, b) = g.edge_endpoints(e).unwrap();
            assert!(c.is_occupied(a) && c.is_occupied(b));
        }
    }

    #[test]
    fn blue_edge_set_json_round_trip() {
        let g = make_geometry(2, &[9, 7], Boundary::Free).unwrap();
        let c = sample_sites(&g, 0.7, 3).unwrap();
        let segs = feasible_segments(&c);
        let blue = independent_blue(&c, &segs, 0.5, 4).unwrap();
        let back = BlueEdgeSet::from_json(&blue.to_json().unwrap()).unwrap();
        assert_eq!(back, blue);
    }
}

//! Library values against independent brute-force and closed-form oracles.

mod common;

use common::*;
use seglat::analytic::{
    collinear_pair_prob_one_choice, compass_spectral_radius, compass_threshold, lambda_one_choice,
    perp_pair_prob_one_choice,
};
use seglat::cluster::clusters;
use seglat::lattice::{next_occupied, sample_sites, Boundary, Direction, Geometry};
use seglat::models::{feasible_segments, ChoiceAssignment};
use seglat::montecarlo::ModelSpec;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn spectral_radius_matches_cubic_roots() {
    for d in 2..=4 {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let lib = compass_spectral_radius(d, p).unwrap();
            let oracle = spectral_radius_oracle(d, p);
            assert!((lib - oracle).abs() < 1e-8, "d={d} p={p}: {lib} vs {oracle}");
        }
    }
}

#[test]
fn radius_at_full_density() {
    // Double eigenvalue (2d-1)/(2d) with a Jordan block.
    for d in 2..=4 {
        let expected = (2 * d - 1) as f64 / (2 * d) as f64;
        assert!((compass_spectral_radius(d, 1.0).unwrap() - expected).abs() < 1e-8);
    }
}

#[test]
fn compass_threshold_matches_determinant_root() {
    // Frozen from det(I - M(p)) = 0 solved by hand at d = 2: p = 146/147.
    let t2 = compass_threshold(2).unwrap();
    assert!((t2.p - 146.0 / 147.0).abs() < 1e-6, "{}", t2.p);
    for d in 2..=4 {
        let t = compass_threshold(d).unwrap();
        let oracle = compass_threshold_oracle(d, 0.5, 1.0);
        assert!((t.p - oracle).abs() < 1e-6, "d={d}: {} vs {oracle}", t.p);
        assert!((spectral_radius_oracle(d, t.p) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn pair_probabilities_match_choice_enumeration() {
    for d in 2..=4 {
        let col = collinear_pair_prob_one_choice(d, 1.0).unwrap();
        let perp = perp_pair_prob_one_choice(d, 1.0).unwrap();
        assert!((col - collinear_triples_full_density(d)).abs() < 1e-15);
        assert!((perp - perp_triples_full_density(d)).abs() < 1e-15);
    }
    assert_eq!(collinear_triples_full_density(2), 5.0 / 32.0);
    assert_eq!(perp_triples_full_density(2), 5.0 / 32.0);
}

#[test]
fn lambda_matches_endpoint_enumeration() {
    for d in 1..=5 {
        let n = 2 * d;
        // The edge is blue iff the left end points right or the right end points left.
        let hits = (0..n * n).filter(|&i| i / n == 0 || i % n == 1).count();
        let oracle = hits as f64 / (n * n) as f64;
        assert!((lambda_one_choice(d).unwrap() - oracle).abs() < 1e-15);
    }
}

fn sorted_library_components(g: &Geometry, report: &seglat::cluster::ClusterReport) -> Vec<Vec<usize>> {
    let mut comps = vec![Vec::new(); report.component_count()];
    for s in 0..g.site_count() {
        if let Some(c) = report.component_of[s] {
            comps[c as usize].push(s);
        }
    }
    comps.sort();
    comps
}

#[test]
fn components_match_breadth_first_search() {
    let specs = [
        ModelSpec::one_choice(2, 0.6),
        ModelSpec::independent(2, 0.7, 0.5),
        ModelSpec::mixed(2, 0.8, 0.6),
        ModelSpec::independent(3, 0.5, 0.4),
    ];
    for spec in &specs {
        let sides: &[usize] = if spec.d == 2 { &[4, 7, 16, 32] } else { &[4, 7, 10] };
        for &side in sides {
            for boundary in [Boundary::Torus, Boundary::Free] {
                let g = Geometry::cube(spec.d, side, boundary).unwrap();
                for rep in 0..6 {
                    let blue = spec.sample(&g, 17, rep).unwrap();
                    let report = clusters(&g, &blue);
                    assert_eq!(sorted_library_components(&g, &report), bfs_components(&g, &blue));
                    let mut sizes = report.sizes.clone();
                    sizes.sort_unstable();
                    let mut bfs: Vec<usize> = bfs_components(&g, &blue).iter().map(Vec::len).collect();
                    bfs.sort_unstable();
                    assert_eq!(sizes, bfs);
                }
            }
        }
    }
}

#[test]
fn wrap_flags_match_lifted_search() {
    let g = Geometry::cube(2, 6, Boundary::Torus).unwrap();
    let mut wrapping = 0;
    for (i, spec) in [
        ModelSpec::independent(2, 0.6, 0.5),
        ModelSpec::mixed(2, 0.8, 0.7),
        ModelSpec::one_choice(2, 0.7),
    ]
    .iter()
    .enumerate()
    {
        for rep in 0..60 {
            let blue = spec.sample(&g, 100 + i as u64, rep).unwrap();
            let report = clusters(&g, &blue);
            for (c, flags) in report.wrap_flags.iter().enumerate() {
                let start = report
                    .component_of
                    .iter()
                    .position(|&x| x == Some(c as u32))
                    .unwrap();
                assert_eq!(flags, &winding_oracle(&g, &blue, start, 20), "rep {rep} comp {c}");
                wrapping += usize::from(flags.iter().any(|&f| f));
            }
        }
    }
    assert!(wrapping > 0);
}

#[test]
fn gaps_are_geometric() {
    let p = 0.3;
    let g = Geometry::cube(1, 400_000, Boundary::Torus).unwrap();
    let cfg = sample_sites(&g, p, 5).unwrap();
    let bins = 25;
    let mut counts = vec![0u64; bins];
    let right = Direction::new(0, true);
    for s in cfg.occupied_sites().take(100_000) {
        let (_, gap) = next_occupied(&cfg, s, right).unwrap();
        counts[gap.min(bins - 1)] += 1;
    }
    let q: f64 = 1.0 - p;
    let mut probs: Vec<f64> = (0..bins - 1).map(|k| p * q.powi(k as i32)).collect();
    probs.push(q.powi(bins as i32 - 1));
    let stat = chi_square(&counts, &probs);
    let crit = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(stat < crit, "chi2 {stat} >= {crit}");
}

#[test]
fn choices_are_uniform() {
    let g = Geometry::cube(3, 40, Boundary::Torus).unwrap();
    let cfg = sample_sites(&g, 0.5, 9).unwrap();
    let choices = ChoiceAssignment::draw(&cfg, 10);
    let mut counts = [0u64; 6];
    for (_, dir) in choices.iter() {
        counts[dir.index()] += 1;
    }
    let stat = chi_square_uniform(&counts);
    let crit = ChiSquared::new(5.0).unwrap().inverse_cdf(0.999);
    assert!(stat < crit, "chi2 {stat} >= {crit}");
}

#[test]
fn feasible_segments_are_exhaustive_and_feasible() {
    let g = Geometry::cube(2, 24, Boundary::Torus).unwrap();
    for rep in 0..10 {
        let cfg = sample_sites(&g, 0.3, rep).unwrap();
        let segs = feasible_segments(&cfg);
        for s in segs.segments() {
            let sites: Vec<usize> = s.sites(&g).collect();
            let interior = if s.is_full_cycle() {
                &sites[1..]
            } else {
                assert!(cfg.is_occupied(*sites.last().unwrap()));
                &sites[1..sites.len() - 1]
            };
            assert!(cfg.is_occupied(sites[0]));
            assert!(interior.iter().all(|&v| !cfg.is_occupied(v)));
        }
        // Every edge whose line holds an occupied site lies in exactly one
        // segment; the others in none.
        let mut cover = vec![0u32; g.edge_slots()];
        for s in segs.segments() {
            for e in s.edges(&g) {
                cover[e] += 1;
            }
        }
        for site in 0..g.site_count() {
            for axis in 0..2 {
                let dir = Direction::new(axis, true);
                let mut cur = site;
                let mut line_occupied = false;
                for _ in 0..24 {
                    line_occupied |= cfg.is_occupied(cur);
                    cur = g.step(cur, dir).unwrap();
                }
                assert_eq!(cover[site * 2 + axis], u32::from(line_occupied));
            }
        }
    }
}

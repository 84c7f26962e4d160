use std::fmt::Write;
use std::fs;

use super::{CmdResult, Failure, RenderArgs, EXIT_OK};
use crate::cluster::clusters;
use crate::lattice::SiteConfig;
use crate::models::BlueEdgeSet;
use crate::{Error, Result};

const BLUE: &str = "#4a7fd4";
const DARK: &str = "#0b2a6b";
const SITE: &str = "#555555";

/// SVG drawing of a two-dimensional free-boundary sample.
///
/// Blue unit edges are drawn as strokes, occupied sites as dots. Segments
/// meeting the boundary are not part of the sample and so are not drawn.
pub fn render_svg(
    sites: &SiteConfig,
    edges: &BlueEdgeSet,
    omit_plain: bool,
    highlight_left: bool,
    scale: f64,
) -> Result<String> {
    let g = sites.geometry();
    if g.dim() != 2 {
        return Err(Error::Geometry(format!(
            "rendering needs d = 2, got d = {}",
            g.dim()
        )));
    }
    if g.is_torus() {
        return Err(Error::Geometry("rendering needs a free boundary".into()));
    }
    if edges.geometry() != g {
        return Err(Error::Artifact(
            "edge and site artifacts have different geometries".into(),
        ));
    }
    let (w, h) = (g.len(0), g.len(1));
    let px = |x: usize| (x as f64 + 0.5) * scale;
    // y grows upward in the lattice and downward in SVG.
    let py = |y: usize| (h as f64 - y as f64 - 0.5) * scale;
    let report = clusters(g, edges);
    let mut dark = vec![false; report.component_count()];
    if highlight_left {
        for y in 0..h {
            let s = g.index(&[0, y]).expect("in range");
            if let Some(c) = report.component_of[s] {
                dark[c as usize] = true;
            }
        }
    }
    let blue_sites = edges.blue_sites();
    let mut svg = String::new();
    let (width, height) = (w as f64 * scale, h as f64 * scale);
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .expect("string write");
    writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#).expect("string write");
    let stroke = scale * 0.25;
    for e in edges.edges() {
        let (u, v) = g.edge_endpoints(e).expect("blue edges exist");
        let colour = match report.component_of[u] {
            Some(c) if dark[c as usize] => DARK,
            _ => BLUE,
        };
        let (x1, y1, x2, y2) = (
            px(g.coord(u, 0)),
            py(g.coord(u, 1)),
            px(g.coord(v, 0)),
            py(g.coord(v, 1)),
        );
        writeln!(
            svg,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="{stroke}" stroke-linecap="round"/>"#
        )
        .expect("string write");
    }
    let radius = scale * 0.2;
    for s in sites.occupied_sites() {
        if omit_plain && !blue_sites[s] {
            continue;
        }
        let (cx, cy) = (px(g.coord(s, 0)), py(g.coord(s, 1)));
        writeln!(svg, r#"<circle cx="{cx}" cy="{cy}" r="{radius}" fill="{SITE}"/>"#).expect("string write");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn cmd_render(a: &RenderArgs) -> CmdResult {
    if a.scale.is_nan() || a.scale <= 0.0 {
        return Err(Failure::usage("--scale must be positive"));
    }
    let sites = SiteConfig::from_json(&fs::read_to_string(&a.sites).map_err(Error::from)?)?;
    let edges = BlueEdgeSet::from_json(&fs::read_to_string(&a.edges).map_err(Error::from)?)?;
    let svg = render_svg(&sites, &edges, a.omit_plain, a.highlight_left, a.scale)?;
    fs::write(&a.out, svg).map_err(Error::from)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{sample_sites, Boundary, Geometry};
    use crate::models::{feasible_segments, independent_blue};

    fn sample(p: f64, lambda: f64, boundary: Boundary) -> (SiteConfig, BlueEdgeSet) {
        let g = Geometry::cube(2, 6, boundary).unwrap();
        let c = sample_sites(&g, p, 1).unwrap();
        let b = independent_blue(&c, &feasible_segments(&c), lambda, 2).unwrap();
        (c, b)
    }

    #[test]
    fn empty_and_full() {
        let (c, b) = sample(0.5, 0.0, Boundary::Free);
        let svg = render_svg(&c, &b, false, false, 10.0).unwrap();
        assert!(!svg.contains("<line"));
        assert!(svg.ends_with("</svg>\n"));
        let (c, b) = sample(1.0, 1.0, Boundary::Free);
        let svg = render_svg(&c, &b, true, true, 10.0).unwrap();
        assert_eq!(svg.matches("<line").count(), 2 * 6 * 5);
        assert_eq!(svg.matches("<circle").count(), 36);
        assert!(svg.contains(DARK));
    }

    #[test]
    fn omit_plain_drops_isolated_sites() {
        let (c, b) = sample(0.5, 0.0, Boundary::Free);
        let svg = render_svg(&c, &b, true, false, 10.0).unwrap();
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn torus_rejected() {
        let (c, b) = sample(0.5, 0.5, Boundary::Torus);
        assert!(matches!(
            render_svg(&c, &b, false, false, 10.0),
            Err(Error::Geometry(_))
        ));
    }
}

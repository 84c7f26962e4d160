use crate::lattice::{Direction, Geometry, SiteConfig};

const NONE: u32 = u32::MAX;

/// A feasible pair joined along `axis`, running in the positive direction
/// from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub axis: usize,
    /// Index of the site where the line meets coordinate 0 along `axis`.
    pub line: usize,
    pub a: usize,
    pub b: usize,
    /// Crosses the periodic seam, or is a full cycle (`a == b`).
    pub wraps: bool,
    /// Unoccupied sites strictly between `a` and `b`.
    pub interior_count: usize,
}

impl Segment {
    /// Number of unit edges covered.
    pub fn edge_len(&self) -> usize {
        self.interior_count + 1
    }

    pub fn is_full_cycle(&self) -> bool {
        self.wraps && self.a == self.b
    }

    /// Edge slots covered, walking from `a` to `b`.
    pub fn edges<'g>(&self, geometry: &'g Geometry) -> impl Iterator<Item = usize> + 'g {
        let d = geometry.dim();
        let axis = self.axis;
        let plus = Direction::new(axis, true);
        let mut cur = self.a;
        (0..self.edge_len()).map(move |_| {
            let e = cur * d + axis;
            cur = geometry.step(cur, plus).expect("segment stays inside the window");
            e
        })
    }

    /// Sites covered, endpoints included (`a` once for a full cycle).
    pub fn sites<'g>(&self, geometry: &'g Geometry) -> impl Iterator<Item = usize> + 'g {
        let plus = Direction::new(self.axis, true);
        let count = if self.is_full_cycle() {
            self.edge_len()
        } else {
            self.edge_len() + 1
        };
        let mut cur = self.a;
        (0..count).map(move |_| {
            let s = cur;
            if let Some(n) = geometry.step(cur, plus) {
                cur = n;
            }
            s
        })
    }
}

/// All feasible segments of a configuration with per-site lookup.
#[derive(Clone, Debug)]
pub struct SegmentSet {
    segments: Vec<Segment>,
    d: usize,
    forward: Vec<u32>,
    backward: Vec<u32>,
}

impl SegmentSet {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn get(&self, id: usize) -> &Segment {
        &self.segments[id]
    }

    /// Segment reached from occupied `site` by scanning along `dir`.
    #[inline]
    pub fn toward(&self, site: usize, dir: Direction) -> Option<usize> {
        let table = if dir.positive {
            &self.forward
        } else {
            &self.backward
        };
        let id = table[site * self.d + dir.axis];
        (id != NONE).then_some(id as usize)
    }

    /// Ids of the segments having `site` as an endpoint.
    pub fn incident(&self, site: usize) -> Vec<usize> {
        let mut ids: Vec<usize> = Direction::all(self.d)
            .filter_map(|dir| self.toward(site, dir))
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }
}

/// Every feasible pair of the window.
///
/// On a torus consecutive occupied sites of each line are joined cyclically.
/// In a free box, stretches that reach the boundary before an occupied site
/// are dropped.
pub fn feasible_segments(config: &SiteConfig) -> SegmentSet {
    let g = config.geometry();
    let d = g.dim();
    let n = g.site_count();
    let mut segments = Vec::new();
    let mut forward = vec![NONE; n * d];
    let mut backward = vec![NONE; n * d];
    let mut positions = Vec::new();

    for axis in 0..d {
        let l = g.len(axis);
        let stride = g.stride(axis);
        for line in (0..n).filter(|&s| g.coord(s, axis) == 0) {
            positions.clear();
            positions.extend((0..l).filter(|&t| config.is_occupied(line + t * stride)));
            let k = positions.len();
            let pairs = match (g.is_torus(), k) {
                (_, 0) => 0,
                (true, _) => k,
                (false, _) => k - 1,
            };
            for i in 0..pairs {
                let ta = positions[i];
                let (tb, span) = if i + 1 < k {
                    (positions[i + 1], positions[i + 1] - ta)
                } else {
                    (positions[0], positions[0] + l - ta)
                };
                let seg = Segment {
                    axis,
                    line,
                    a: line + ta * stride,
                    b: line + tb * stride,
                    wraps: i + 1 >= k,
                    interior_count: span - 1,
                };
                let id = segments.len() as u32;
                forward[seg.a * d + axis] = id;
                backward[seg.b * d + axis] = id;
                segments.push(seg);
            }
        }
    }
    SegmentSet {
        segments,
        d,
        forward,
        backward,
    }
}

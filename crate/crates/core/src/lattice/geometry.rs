use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Torus,
    Free,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Torus => f.write_str("torus"),
            Boundary::Free => f.write_str("free"),
        }
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(Boundary::Torus),
            "free" => Ok(Boundary::Free),
            _ => Err(Error::Geometry(format!("unknown boundary {s:?}"))),
        }
    }
}

/// A finite box of `Z^d` with per-axis side lengths.
///
/// Sites are indexed with axis 0 varying fastest, so `site = Σ x_i · stride_i`
/// with `stride_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    lengths: Vec<usize>,
    strides: Vec<usize>,
    boundary: Boundary,
    sites: usize,
}

pub const MIN_SIDE: usize = 4;

pub fn make_geometry(d: usize, lengths: &[usize], boundary: Boundary) -> Result<Geometry> {
    if d == 0 || lengths.is_empty() {
        return Err(Error::Geometry("dimension list is empty".into()));
    }
    if lengths.len() != d {
        return Err(Error::Geometry(format!(
            "{} side lengths given for d = {d}",
            lengths.len()
        )));
    }
    if let Some(&l) = lengths.iter().find(|&&l| l < MIN_SIDE) {
        return Err(Error::Geometry(format!(
            "side length {l} below minimum {MIN_SIDE}"
        )));
    }
    let mut strides = Vec::with_capacity(d);
    let mut sites: usize = 1;
    for &l in lengths {
        strides.push(sites);
        sites = sites
            .checked_mul(l)
            .filter(|&n| n.checked_mul(d).is_some() && n <= u32::MAX as usize)
            .ok_or_else(|| Error::Geometry("site count overflows index arithmetic".into()))?;
    }
    Ok(Geometry {
        lengths: lengths.to_vec(),
        strides,
        boundary,
        sites,
    })
}

impl Geometry {
    /// Cubic window `L^d`.
    pub fn cube(d: usize, side: usize, boundary: Boundary) -> Result<Self> {
        make_geometry(d, &vec![side; d], boundary)
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn len(&self, axis: usize) -> usize {
        self.lengths[axis]
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn is_torus(&self) -> bool {
        self.boundary == Boundary::Torus
    }

    pub fn site_count(&self) -> usize {
        self.sites
    }

    /// Edge slots: one per `(site, axis)`, the edge from `site` to `site + e_axis`.
    /// On a free box the slots on the upper face of each axis are unused.
    pub fn edge_slots(&self) -> usize {
        self.sites * self.dim()
    }

    /// Number of edges that actually exist in the window.
    pub fn edge_count(&self) -> usize {
        match self.boundary {
            Boundary::Torus => self.edge_slots(),
            Boundary::Free => (0..self.dim())
                .map(|a| self.sites / self.lengths[a] * (self.lengths[a] - 1))
                .sum(),
        }
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.strides[axis]
    }

    pub fn coord(&self, site: usize, axis: usize) -> usize {
        (site / self.strides[axis]) % self.lengths[axis]
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        (0..self.dim()).map(|a| self.coord(site, a)).collect()
    }

    pub fn index(&self, coords: &[usize]) -> Option<usize> {
        if coords.len() != self.dim() {
            return None;
        }
        let mut site = 0;
        for (a, &x) in coords.iter().enumerate() {
            if x >= self.lengths[a] {
                return None;
            }
            site += x * self.strides[a];
        }
        Some(site)
    }

    /// One step from `site` along `dir`; `None` when leaving a free box.
    #[inline]
    pub fn step(&self, site: usize, dir: Direction) -> Option<usize> {
        let a = dir.axis;
        let x = self.coord(site, a);
        let l = self.lengths[a];
        let s = self.strides[a];
        if dir.positive {
            if x + 1 < l {
                Some(site + s)
            } else if self.is_torus() {
                Some(site + s - l * s)
            } else {
                None
            }
        } else if x > 0 {
            Some(site - s)
        } else if self.is_torus() {
            Some(site + (l - 1) * s)
        } else {
            None
        }
    }

    /// Slot of the edge from `site` to `site + e_axis`, if that edge exists.
    #[inline]
    pub fn edge(&self, site: usize, axis: usize) -> Option<usize> {
        if !self.is_torus() && self.coord(site, axis) + 1 == self.lengths[axis] {
            None
        } else {
            Some(site * self.dim() + axis)
        }
    }

    /// Slot of the edge joining `site` with its neighbour along `dir`.
    pub fn edge_toward(&self, site: usize, dir: Direction) -> Option<usize> {
        if dir.positive {
            self.edge(site, dir.axis)
        } else {
            self.step(site, dir).and_then(|n| self.edge(n, dir.axis))
        }
    }

    /// Endpoints `(u, u + e_axis)` of an edge slot, or `None` for an unused slot.
    pub fn edge_endpoints(&self, edge: usize) -> Option<(usize, usize)> {
        let d = self.dim();
        let (site, axis) = (edge / d, edge % d);
        if site >= self.sites {
            return None;
        }
        self.step(site, Direction::new(axis, true)).map(|v| (site, v))
    }

    pub fn directions(&self) -> impl Iterator<Item = Direction> {
        Direction::all(self.dim())
    }
}

/// One of the `2d` unit vectors `±e_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    pub axis: usize,
    pub positive: bool,
}

impl Direction {
    pub fn new(axis: usize, positive: bool) -> Self {
        Self { axis, positive }
    }

    /// Dense index in `[0, 2d)`: `2·axis` for `+e_axis`, `2·axis + 1` for `-e_axis`.
    pub fn index(self) -> usize {
        2 * self.axis + usize::from(!self.positive)
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(i / 2, i.is_multiple_of(2))
    }

    pub fn negate(self) -> Self {
        Self::new(self.axis, !self.positive)
    }

    pub fn sign(self) -> i32 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn all(d: usize) -> impl Iterator<Item = Direction> {
        (0..2 * d).map(Direction::from_index)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{}", if self.positive { '+' } else { '-' }, self.axis + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn site_counts() {
        let g = make_geometry(2, &[60, 60], Boundary::Free).unwrap();
        assert_eq!(g.site_count(), 3600);
        assert_eq!(
            make_geometry(2, &[4, 4], Boundary::Torus).unwrap().site_count(),
            16
        );
        assert_eq!(Geometry::cube(3, 8, Boundary::Torus).unwrap().site_count(), 512);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(make_geometry(2, &[3, 8], Boundary::Torus).is_err());
        assert!(make_geometry(0, &[], Boundary::Torus).is_err());
        assert!(make_geometry(2, &[8], Boundary::Torus).is_err());
        assert!(make_geometry(1, &[usize::MAX], Boundary::Torus).is_err());
    }

    #[test]
    fn indexing_is_bijective() {
        let g = make_geometry(3, &[4, 5, 6], Boundary::Torus).unwrap();
        for s in 0..g.site_count() {
            assert_eq!(g.index(&g.coords(s)), Some(s));
        }
    }

    #[test]
    fn directions_and_negation() {
        let dirs: Vec<_> = Direction::all(3).collect();
        assert_eq!(dirs.len(), 6);
        for (i, d) in dirs.iter().enumerate() {
            assert_eq!(d.index(), i);
            assert_eq!(d.negate().negate(), *d);
            assert_ne!(d.negate(), *d);
        }
    }

    #[test]
    fn torus_steps_wrap_and_free_steps_stop() {
        let t = Geometry::cube(2, 4, Boundary::Torus).unwrap();
        let f = Geometry::cube(2, 4, Boundary::Free).unwrap();
        let corner = t.index(&[3, 0]).unwrap();
        assert_eq!(t.step(corner, Direction::new(0, true)), t.index(&[0, 0]));
        assert_eq!(t.step(corner, Direction::new(1, false)), t.index(&[3, 3]));
        assert_eq!(f.step(corner, Direction::new(0, true)), None);
        assert_eq!(f.edge(corner, 0), None);
        assert_eq!(f.edge_count(), 24);
        assert_eq!(t.edge_count(), 32);
    }
}

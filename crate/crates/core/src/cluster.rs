//! Connected components of blue edges with torus-wrap detection.
//!
//! Each union-find node stores its displacement to its parent in unwrapped
//! lattice coordinates. An edge joining two sites that already share a root,
//! but whose displacements disagree, closes a loop with nonzero winding; the
//! axes where they disagree are the axes the component wraps.

use crate::lattice::Geometry;
use crate::models::BlueEdgeSet;

const UNSET: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterReport {
    /// Component id per site; `None` for sites with no blue edge.
    pub component_of: Vec<Option<u32>>,
    pub sizes: Vec<usize>,
    pub wrap_flags: Vec<Vec<bool>>,
    /// Largest component size over the number of sites in the window.
    pub largest_fraction: f64,
}

impl ClusterReport {
    pub fn component_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn blue_site_count(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn wraps(&self, component: usize) -> bool {
        self.wrap_flags[component].iter().any(|&w| w)
    }
}

/// Union-find over the sites of a geometry, fed one edge at a time.
pub struct UnionFind<'g> {
    geometry: &'g Geometry,
    parent: Vec<u32>,
    size: Vec<u32>,
    disp: Vec<i32>,
    wraps: Vec<u8>,
    touched: Vec<bool>,
    path: Vec<usize>,
}

impl<'g> UnionFind<'g> {
    pub fn new(geometry: &'g Geometry) -> Self {
        let n = geometry.site_count();
        Self {
            geometry,
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            disp: vec![0; n * geometry.dim()],
            wraps: vec![0; n],
            touched: vec![false; n],
            path: Vec::new(),
        }
    }

    /// Root of `x`, compressing the path and its displacements.
    fn find(&mut self, x: usize) -> usize {
        let d = self.geometry.dim();
        let mut root = x;
        self.path.clear();
        while self.parent[root] as usize != root {
            self.path.push(root);
            root = self.parent[root] as usize;
        }
        // Walk back from the node nearest the root, accumulating offsets.
        for i in (0..self.path.len()).rev() {
            let node = self.path[i];
            let par = self.parent[node] as usize;
            if par != root {
                for k in 0..d {
                    self.disp[node * d + k] += self.disp[par * d + k];
                }
                self.parent[node] = root as u32;
            }
        }
        root
    }

    fn offset(&self, x: usize, k: usize) -> i32 {
        self.disp[x * self.geometry.dim() + k]
    }

    /// Adds the edge in slot `edge` (from `u` to `u + e_axis`).
    pub fn add_edge(&mut self, edge: usize) {
        let d = self.geometry.dim();
        let Some((u, v)) = self.geometry.edge_endpoints(edge) else {
            return;
        };
        let axis = edge % d;
        self.touched[u] = true;
        self.touched[v] = true;
        let ru = self.find(u);
        let rv = self.find(v);
        // pos(rv) - pos(ru) = disp(u) + e_axis - disp(v)
        let delta = |k: usize, uf: &Self| uf.offset(u, k) + i32::from(k == axis) - uf.offset(v, k);
        if ru == rv {
            for k in 0..d {
                if delta(k, self) != 0 {
                    self.wraps[ru] |= 1 << k;
                }
            }
            return;
        }
        let (big, small, sign) = if self.size[ru] >= self.size[rv] {
            (ru, rv, 1)
        } else {
            (rv, ru, -1)
        };
        for k in 0..d {
            let shift = sign * delta(k, self);
            self.disp[small * d + k] = shift;
        }
        self.parent[small] = big as u32;
        self.size[big] += self.size[small];
        self.wraps[big] |= self.wraps[small];
    }

    pub fn finish(mut self) -> ClusterReport {
        let n = self.geometry.site_count();
        let d = self.geometry.dim();
        let mut label = vec![UNSET; n];
        let mut component_of = vec![None; n];
        let mut sizes = Vec::new();
        let mut wrap_flags = Vec::new();
        for (s, slot) in component_of.iter_mut().enumerate() {
            if !self.touched[s] {
                continue;
            }
            let r = self.find(s);
            if label[r] == UNSET {
                label[r] = sizes.len() as u32;
                sizes.push(0);
                wrap_flags.push((0..d).map(|k| self.wraps[r] >> k & 1 == 1).collect());
            }
            *slot = Some(label[r]);
            sizes[label[r] as usize] += 1;
        }
        let largest = sizes.iter().copied().max().unwrap_or(0);
        ClusterReport {
            component_of,
            sizes,
            wrap_flags,
            largest_fraction: largest as f64 / n as f64,
        }
    }
}

/// Components of the blue subgraph. Component ids follow the smallest site
/// index in each component.
pub fn clusters(geometry: &Geometry, edges: &BlueEdgeSet) -> ClusterReport {
    let mut uf = UnionFind::new(geometry);
    for e in edges.edges() {
        uf.add_edge(e);
    }
    uf.finish()
}

/// Whether some component wraps around at least one axis.
pub fn wraps_any(report: &ClusterReport) -> bool {
    report.wrap_flags.iter().any(|f| f.iter().any(|&w| w))
}

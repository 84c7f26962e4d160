//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use seglat::lattice::Geometry;
use seglat::models::BlueEdgeSet;

/// Largest modulus among the roots of `x^3 + a x^2 + b x + c`, by the
/// trigonometric or Cardano formula.
pub fn cubic_max_modulus(a: f64, b: f64, c: f64) -> f64 {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    let shift = a / 3.0;
    if r * r < q * q * q {
        let theta = (r / (q * q * q).sqrt()).acos();
        let m = -2.0 * q.sqrt();
        let tau = std::f64::consts::TAU;
        [theta, theta + tau, theta - tau]
            .iter()
            .map(|t| (m * (t / 3.0).cos() - shift).abs())
            .fold(0.0, f64::max)
    } else {
        let big_a = -r.signum() * (r.abs() + (r * r - q * q * q).sqrt()).cbrt();
        let big_b = if big_a == 0.0 { 0.0 } else { q / big_a };
        let real = big_a + big_b - shift;
        let re = -(big_a + big_b) / 2.0 - shift;
        let im = 3f64.sqrt() / 2.0 * (big_a - big_b);
        real.abs().max(re.hypot(im))
    }
}

/// Characteristic polynomial `x^3 + a x^2 + b x + c` of a 3x3 matrix.
pub fn char_poly(m: &[[f64; 3]; 3]) -> (f64, f64, f64) {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    (-tr, minors, -det)
}

/// Compass matrix entries, written out independently of the library.
pub fn compass_matrix_oracle(d: usize, p: f64) -> [[f64; 3]; 3] {
    let q = 1.0 - p;
    let k = (2 * d - 1) as f64;
    let inv = 1.0 / (2 * d) as f64;
    [[k * q, k * q, k * q * inv], [k, k * inv, 0.0], [0.0, k, k * inv]]
}

pub fn spectral_radius_oracle(d: usize, p: f64) -> f64 {
    let (a, b, c) = char_poly(&compass_matrix_oracle(d, p));
    cubic_max_modulus(a, b, c)
}

/// Density where `det(I - M(p))` vanishes, by bisection on `[lo, hi]`.
pub fn compass_threshold_oracle(d: usize, lo: f64, hi: f64) -> f64 {
    let f = |p: f64| {
        let (a, b, c) = char_poly(&compass_matrix_oracle(d, p));
        1.0 + a + b + c
    };
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Components of the blue graph by breadth-first search, as sorted sets of
/// sites.
pub fn bfs_components(g: &Geometry, blue: &BlueEdgeSet) -> Vec<Vec<usize>> {
    let adj = adjacency(g, blue);
    let mut seen = vec![false; g.site_count()];
    let mut out = Vec::new();
    for s in 0..g.site_count() {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out
}

/// Neighbour list with the winding change of each step.
fn adjacency(g: &Geometry, blue: &BlueEdgeSet) -> Vec<Vec<(usize, Vec<i32>)>> {
    let d = g.dim();
    let mut adj = vec![Vec::new(); g.site_count()];
    for e in blue.edges() {
        let (a, b) = g.edge_endpoints(e).unwrap();
        let axis = e % d;
        let mut w = vec![0; d];
        if g.coord(b, axis) < g.coord(a, axis) {
            w[axis] = 1;
        }
        let neg: Vec<i32> = w.iter().map(|x| -x).collect();
        adj[a].push((b, w));
        adj[b].push((a, neg));
    }
    adj
}

/// Per-axis wrap flags of the component containing `start`, by exhaustive
/// search of the lifted graph with winding vectors bounded by `bound`.
pub fn winding_oracle(g: &Geometry, blue: &BlueEdgeSet, start: usize, bound: i32) -> Vec<bool> {
    let d = g.dim();
    let adj = adjacency(g, blue);
    let mut seen: HashMap<(usize, Vec<i32>), ()> = HashMap::new();
    let mut flags = vec![false; d];
    let origin = (start, vec![0; d]);
    seen.insert(origin.clone(), ());
    let mut queue = VecDeque::from([origin]);
    while let Some((u, w)) = queue.pop_front() {
        if u == start {
            for k in 0..d {
                flags[k] |= w[k] != 0;
            }
        }
        for (v, dw) in &adj[u] {
            let nw: Vec<i32> = w.iter().zip(dw).map(|(a, b)| a + b).collect();
            if nw.iter().any(|x| x.abs() > bound) {
                continue;
            }
            let key = (*v, nw);
            if !seen.contains_key(&key) {
                seen.insert(key.clone(), ());
                queue.push_back(key);
            }
        }
    }
    flags
}

/// Probability that two adjacent collinear edges `(-e1, o)` and `(o, e1)`
/// are both blue when all three sites are occupied and each picks one of
/// `2d` directions, by enumerating the `(2d)^3` choice triples.
pub fn collinear_triples_full_density(d: usize) -> f64 {
    let n = 2 * d;
    // Direction index: 2*axis for positive, 2*axis+1 for negative.
    let (plus_x, minus_x) = (0, 1);
    let mut hits = 0;
    for left in 0..n {
        for mid in 0..n {
            for right in 0..n {
                let e1 = left == plus_x || mid == minus_x;
                let e2 = mid == plus_x || right == minus_x;
                hits += usize::from(e1 && e2);
            }
        }
    }
    hits as f64 / (n * n * n) as f64
}

/// Same for the perpendicular pair `(o, e1)` and `(o, e2)`.
pub fn perp_triples_full_density(d: usize) -> f64 {
    let n = 2 * d;
    let (plus_x, minus_x, plus_y, minus_y) = (0, 1, 2, 3);
    let mut hits = 0;
    for o in 0..n {
        for a in 0..n {
            for b in 0..n {
                let e1 = o == plus_x || a == minus_x;
                let e2 = o == plus_y || b == minus_y;
                hits += usize::from(e1 && e2);
            }
        }
    }
    hits as f64 / (n * n * n) as f64
}

/// Probability an edge is open in mixed site-bond percolation, summing the
/// eight outcomes of (left site, right site, bond coin).
pub fn mixed_edge_density(p: f64, lambda: f64) -> f64 {
    let mut total = 0.0;
    for mask in 0..8u8 {
        let (a, b, c) = (mask & 1 != 0, mask & 2 != 0, mask & 4 != 0);
        let w = [(a, p), (b, p), (c, lambda)]
            .iter()
            .map(|&(on, x)| if on { x } else { 1.0 - x })
            .product::<f64>();
        if a && b && c {
            total += w;
        }
    }
    total
}

/// Pearson statistic of observed counts against equal expected counts.
pub fn chi_square_uniform(counts: &[u64]) -> f64 {
    let n: u64 = counts.iter().sum();
    let e = n as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - e).powi(2) / e).sum()
}

/// Pearson statistic of observed counts against expected probabilities,
/// with the tail beyond the last bin pooled into it.
pub fn chi_square(counts: &[u64], probs: &[f64]) -> f64 {
    let n: u64 = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &pr)| {
            let e = n as f64 * pr;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

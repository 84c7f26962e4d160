use serde::{Deserialize, Serialize};

use super::{LocalEvent, ModelSpec};
use crate::models::ModelTag;
use crate::{Error, Result};

/// Oracle value with a bound on the omitted probability mass.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Default)]
struct Acc {
    sum: f64,
    comp: f64,
}

impl Acc {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.comp
    }
}

/// State of the origin: vacant, or occupied with a chosen direction index.
#[derive(Clone, Copy)]
enum Origin {
    Vacant,
    Occupied(usize),
}

struct Ctx {
    model: ModelTag,
    d: usize,
    p: f64,
    lambda: f64,
    cutoff: usize,
}

impl Ctx {
    fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// Joint law of the colours of unit edges `(x, x+1)`, `x ∈ edges`, on a
    /// line through the origin along `axis`. Entry `m` is the probability
    /// that exactly the edges in bitmask `m` are blue.
    fn line(&self, axis: usize, edges: &[i64], origin: Origin) -> Vec<f64> {
        let lo = *edges.iter().min().expect("edge");
        let hi = edges.iter().max().expect("edge") + 1;
        let free: Vec<i64> = (lo..=hi).filter(|&x| x != 0).collect();
        let mut out = vec![Acc::default(); 1 << edges.len()];
        for bits in 0u32..1 << free.len() {
            let mut weight = 1.0;
            let mut occupied = Vec::new();
            for (i, &x) in free.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    weight *= self.p;
                    occupied.push(x);
                } else {
                    weight *= self.q();
                }
            }
            if matches!(origin, Origin::Occupied(_)) {
                occupied.push(0);
            }
            occupied.sort_unstable();
            match self.model {
                ModelTag::Independent => self.independent_line(edges, &occupied, weight, &mut out),
                _ => self.one_choice_line(axis, edges, lo, hi, &occupied, origin, weight, &mut out),
            }
        }
        out.into_iter().map(Acc::value).collect()
    }

    /// Edges `x < y` lie in one segment iff no site of `(x, y]` is
    /// occupied; each segment carries one Bernoulli(λ) colour.
    fn independent_line(&self, edges: &[i64], occupied: &[i64], weight: f64, out: &mut [Acc]) {
        let mut segment = vec![0usize; edges.len()];
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&i| edges[i]);
        let mut next = 0;
        for w in 0..order.len() {
            if w > 0 {
                let (x, y) = (edges[order[w - 1]], edges[order[w]]);
                if occupied.iter().any(|&s| x < s && s <= y) {
                    next += 1;
                }
            }
            segment[order[w]] = next;
        }
        let count = next + 1;
        for colours in 0u32..1 << count {
            let mut w = weight;
            for s in 0..count {
                w *= if colours >> s & 1 == 1 {
                    self.lambda
                } else {
                    1.0 - self.lambda
                };
            }
            let mask = (0..edges.len())
                .filter(|&i| colours >> segment[i] & 1 == 1)
                .fold(0usize, |m, i| m | 1 << i);
            out[mask].add(w);
        }
    }

    /// Enumerates the gaps to the nearest occupied site beyond the window on
    /// both sides (below `cutoff`), then every direction choice of the
    /// segment endpoints other than the origin.
    #[allow(clippy::too_many_arguments)]
    fn one_choice_line(
        &self,
        axis: usize,
        edges: &[i64],
        lo: i64,
        hi: i64,
        core: &[i64],
        origin: Origin,
        weight: f64,
        out: &mut [Acc],
    ) {
        let dirs = 2 * self.d;
        let plus = 2 * axis;
        let minus = 2 * axis + 1;
        let q = self.q();
        for gl in 0..self.cutoff {
            let wl = q.powi(gl as i32) * self.p;
            for gr in 0..self.cutoff {
                let wr = q.powi(gr as i32) * self.p;
                let w = weight * wl * wr;
                if w == 0.0 {
                    continue;
                }
                let mut sites = Vec::with_capacity(core.len() + 2);
                sites.push(lo - 1 - gl as i64);
                sites.extend_from_slice(core);
                sites.push(hi + 1 + gr as i64);
                let covers: Vec<(i64, i64)> = edges
                    .iter()
                    .map(|&x| {
                        let a = *sites.iter().filter(|&&s| s <= x).max().expect("left end");
                        let b = *sites.iter().filter(|&&s| s > x).min().expect("right end");
                        (a, b)
                    })
                    .collect();
                let mut ends: Vec<i64> = covers
                    .iter()
                    .flat_map(|&(a, b)| [a, b])
                    .filter(|&s| s != 0)
                    .collect();
                ends.sort_unstable();
                ends.dedup();
                let combos = dirs.pow(ends.len() as u32);
                let cw = w / combos as f64;
                for mut code in 0..combos {
                    let mut choice = vec![0usize; ends.len()];
                    for c in choice.iter_mut() {
                        *c = code % dirs;
                        code /= dirs;
                    }
                    let chose = |s: i64| -> usize {
                        if s == 0 {
                            match origin {
                                Origin::Occupied(c) => c,
                                Origin::Vacant => unreachable!("vacant origin is never an endpoint"),
                            }
                        } else {
                            choice[ends.binary_search(&s).expect("endpoint")]
                        }
                    };
                    let mask = covers
                        .iter()
                        .enumerate()
                        .filter(|(_, &(a, b))| chose(a) == plus || chose(b) == minus)
                        .fold(0usize, |m, (i, _)| m | 1 << i);
                    out[mask].add(cw);
                }
            }
        }
    }

    fn origins(&self) -> Vec<(Origin, f64)> {
        let dirs = 2 * self.d;
        let mut v = vec![(Origin::Vacant, self.q())];
        v.extend((0..dirs).map(|c| (Origin::Occupied(c), self.p / dirs as f64)));
        v
    }
}

/// Probability of a local event computed by summing over the configurations
/// of the lines through the origin.
///
/// Lines through the origin along distinct axes share only the origin, so
/// the event probability is a sum over the origin's state of products of
/// per-line laws. For the one-choice model each line sums over the gaps to
/// the nearest occupied sites beyond the event window up to `cutoff`, with
/// omitted mass at most `2·(1-p)^cutoff` per line. The independent model
/// needs only the occupancy of the window itself and has no tail.
pub fn truncated_sum_oracle(spec: &ModelSpec, event: LocalEvent, cutoff: usize) -> Result<OracleValue> {
    spec.validate()?;
    if cutoff < 1 {
        return Err(Error::Domain {
            name: "K",
            value: 0.0,
            range: "K >= 1",
        });
    }
    if !matches!(spec.model, ModelTag::OneChoice | ModelTag::Independent) {
        return Err(Error::InvalidEvent(format!("no oracle for model {}", spec.model)));
    }
    event.validate(spec.d, usize::MAX)?;
    let ctx = Ctx {
        model: spec.model,
        d: spec.d,
        p: spec.p,
        lambda: spec.lambda.unwrap_or(0.0),
        cutoff,
    };
    let d = spec.d;
    let (value, lines) = match event {
        LocalEvent::EdgeBlue => (single_line(&ctx, &[0], |m| m == 1), 1),
        LocalEvent::PairCollinear => (single_line(&ctx, &[-1, 0], |m| m == 3), 1),
        LocalEvent::PairCollinearDistance(k) => (single_line(&ctx, &[0, k as i64], |m| m == 3), 1),
        LocalEvent::PairPerp => {
            let v = ctx
                .origins()
                .into_iter()
                .map(|(o, w)| w * ctx.line(0, &[0], o)[1] * ctx.line(1, &[0], o)[1])
                .sum();
            (v, 2)
        }
        LocalEvent::VertexBlue => {
            let none: f64 = ctx
                .origins()
                .into_iter()
                .map(|(o, w)| w * (0..d).map(|a| ctx.line(a, &[-1, 0], o)[0]).product::<f64>())
                .sum();
            (1.0 - none, d)
        }
    };
    let tail_bound = match spec.model {
        ModelTag::OneChoice => 2.0 * lines as f64 * ctx.q().powi(cutoff as i32),
        _ => 0.0,
    };
    Ok(OracleValue { value, tail_bound })
}

fn single_line(ctx: &Ctx, edges: &[i64], event: impl Fn(usize) -> bool) -> f64 {
    ctx.origins()
        .into_iter()
        .map(|(o, w)| {
            w * ctx
                .line(0, edges, o)
                .iter()
                .enumerate()
                .filter(|&(m, _)| event(m))
                .map(|(_, v)| v)
                .sum::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_blue_one_choice() {
        let v = truncated_sum_oracle(&ModelSpec::one_choice(2, 0.5), LocalEvent::EdgeBlue, 60).unwrap();
        assert!(v.tail_bound < 1e-15);
        assert!((v.value - 0.4375).abs() <= v.tail_bound + 1e-15, "{v:?}");
    }

    #[test]
    fn collinear_at_full_density() {
        let v = truncated_sum_oracle(&ModelSpec::one_choice(2, 1.0), LocalEvent::PairCollinear, 1).unwrap();
        assert_eq!(v.tail_bound, 0.0);
        assert!((v.value - 5.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn independent_edge_is_a_single_coin() {
        for &(p, l) in &[(0.3, 0.2), (0.9, 0.7), (1.0, 0.5)] {
            let v = truncated_sum_oracle(&ModelSpec::independent(3, p, l), LocalEvent::EdgeBlue, 1).unwrap();
            assert_eq!(v.tail_bound, 0.0);
            assert!((v.value - l).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = ModelSpec::one_choice(2, 0.5);
        assert!(truncated_sum_oracle(&s, LocalEvent::EdgeBlue, 0).is_err());
        assert!(truncated_sum_oracle(&ModelSpec::mixed(2, 0.5, 0.5), LocalEvent::EdgeBlue, 5).is_err());
    }
}

use super::exact;
use crate::error::{check_density, check_unit};
use crate::{Error, Result};

fn check_dim(d: usize, min: usize) -> Result<()> {
    if d >= min {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "d",
            value: d as f64,
            range: if min == 1 { "d >= 1" } else { "d >= 2" },
        })
    }
}

/// Probability that a given edge is blue in the one-choice model.
pub fn lambda_one_choice(d: usize) -> Result<f64> {
    check_dim(d, 1)?;
    Ok(exact::lambda_one_choice(d))
}

/// Probability that a site is incident to some blue edge (one-choice).
pub fn vertex_blue_prob_one_choice(d: usize, p: f64) -> Result<f64> {
    check_dim(d, 2)?;
    check_density(p)?;
    Ok(exact::vertex_blue_prob_one_choice(d, p))
}

/// Probability that `(o, e1)` and `(o, -e1)` are both blue (one-choice).
pub fn collinear_pair_prob_one_choice(d: usize, p: f64) -> Result<f64> {
    check_dim(d, 2)?;
    check_density(p)?;
    Ok(exact::collinear_pair_prob_one_choice(d, p))
}

/// Probability that `(o, e1)` and `(o, e2)` are both blue (one-choice).
pub fn perp_pair_prob_one_choice(d: usize, p: f64) -> Result<f64> {
    check_dim(d, 2)?;
    check_density(p)?;
    Ok(exact::perp_pair_prob_one_choice(d, p))
}

/// Probability that a site is incident to a blue edge (independent model).
pub fn vertex_blue_prob_independent(d: usize, p: f64, lambda: f64) -> Result<f64> {
    check_dim(d, 2)?;
    check_density(p)?;
    check_unit("lambda", lambda)?;
    Ok(exact::vertex_blue_prob_independent(d, p, lambda))
}

/// Correlation of the blue indicators of two collinear edges with `k` sites
/// between them, counting a shared endpoint (so `k = 1` for adjacent edges).
pub fn collinear_corr_independent(p: f64, k: usize) -> Result<f64> {
    check_density(p)?;
    if k == 0 {
        return Err(Error::Domain {
            name: "k",
            value: 0.0,
            range: "k >= 1",
        });
    }
    Ok(exact::collinear_corr_independent(p, k))
}

/// Mean offspring of the exploration process bounding the blue cluster of
/// the origin in the independent model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchingMeans {
    /// Offspring of an occupied site, `(2d-1)λ/p`.
    pub occupied: f64,
    /// Offspring of an unoccupied site, `2(d-1)λ/p`.
    pub unoccupied: f64,
    /// Both means below one, equivalently `λ < p/(2d-1)`.
    pub subcritical: bool,
}

pub fn branching_means(d: usize, p: f64, lambda: f64) -> Result<BranchingMeans> {
    check_dim(d, 1)?;
    check_density(p)?;
    check_unit("lambda", lambda)?;
    let (occupied, unoccupied) = exact::branching_means(d, p, lambda);
    Ok(BranchingMeans {
        occupied,
        unoccupied,
        subcritical: lambda < p / (2 * d - 1) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_one_choice(2).unwrap(), 0.4375);
        assert!((lambda_one_choice(3).unwrap() - 11.0 / 36.0).abs() < 1e-15);
        assert!(lambda_one_choice(0).is_err());
        let seq: Vec<f64> = (2..=10).map(|d| lambda_one_choice(d).unwrap()).collect();
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn lambda_matches_choice_pair_count() {
        // Edge is missed iff neither endpoint chose it: (2d-1)^2 of (2d)^2 pairs.
        for d in 1..6 {
            let n = 2 * d;
            let missed = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .filter(|&(a, b)| a != 0 && b != 1)
                .count();
            let brute = 1.0 - missed as f64 / (n * n) as f64;
            assert!((brute - lambda_one_choice(d).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn one_choice_vertex_and_pairs() {
        assert_eq!(vertex_blue_prob_one_choice(2, 1.0).unwrap(), 1.0);
        assert!((vertex_blue_prob_one_choice(2, 0.5).unwrap() - 431.0 / 512.0).abs() < 1e-15);
        assert!((collinear_pair_prob_one_choice(2, 1.0).unwrap() - 5.0 / 32.0).abs() < 1e-15);
        assert!((perp_pair_prob_one_choice(2, 1.0).unwrap() - 5.0 / 32.0).abs() < 1e-15);
        assert!(vertex_blue_prob_one_choice(1, 0.5).is_err());
        assert!(vertex_blue_prob_one_choice(2, 0.0).is_err());
    }

    #[test]
    fn monotonicity_in_p() {
        let grid: Vec<f64> = (1..10).map(|i| i as f64 / 10.0).collect();
        for d in 2..5 {
            let v: Vec<f64> = grid
                .iter()
                .map(|&p| vertex_blue_prob_one_choice(d, p).unwrap())
                .collect();
            let c: Vec<f64> = grid
                .iter()
                .map(|&p| collinear_pair_prob_one_choice(d, p).unwrap())
                .collect();
            let q: Vec<f64> = grid
                .iter()
                .map(|&p| perp_pair_prob_one_choice(d, p).unwrap())
                .collect();
            let i: Vec<f64> = grid
                .iter()
                .map(|&p| vertex_blue_prob_independent(d, p, 0.3).unwrap())
                .collect();
            assert!(v.windows(2).all(|w| w[1] > w[0]));
            assert!(c.windows(2).all(|w| w[1] < w[0]));
            assert!(q.windows(2).all(|w| w[1] < w[0]));
            assert!(i.windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn independent_vertex() {
        assert_eq!(vertex_blue_prob_independent(2, 0.4, 0.0).unwrap(), 0.0);
        assert_eq!(vertex_blue_prob_independent(2, 1.0, 0.5).unwrap(), 0.9375);
    }

    #[test]
    fn correlation() {
        assert_eq!(collinear_corr_independent(1.0, 3).unwrap(), 0.0);
        assert!((collinear_corr_independent(0.8, 1).unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(collinear_corr_independent(0.5, 3).unwrap(), 0.125);
        assert!(collinear_corr_independent(0.5, 0).is_err());
    }

    #[test]
    fn branching() {
        let b = branching_means(2, 0.6, 0.1).unwrap();
        assert!((b.occupied - 0.5).abs() < 1e-15);
        assert!((b.unoccupied - 1.0 / 3.0).abs() < 1e-15);
        assert!(b.subcritical);

        let b = branching_means(2, 0.3, 0.2).unwrap();
        assert!((b.occupied - 2.0).abs() < 1e-15);
        assert!((b.unoccupied - 4.0 / 3.0).abs() < 1e-15);
        assert!(!b.subcritical);

        for &(d, p) in &[(2, 0.6), (3, 0.9), (2, 0.35), (4, 0.7)] {
            let b = branching_means(d, p, p / (2 * d - 1) as f64).unwrap();
            assert!((b.occupied - 1.0).abs() < 1e-12);
            assert!(!b.subcritical);
        }
    }
}

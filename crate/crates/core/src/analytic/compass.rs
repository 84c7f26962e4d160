use crate::error::check_unit;
use crate::{Error, Result};

/// Convergence tolerance of the spectral radius.
pub const POWER_TOLERANCE: f64 = 1e-10;
/// Width of the final bisection bracket for the threshold.
pub const THRESHOLD_TOLERANCE: f64 = 1e-8;

const MAX_SQUARINGS: usize = 60;

type Mat = [[f64; 3]; 3];

/// Mean matrix of the three-type exploration of corrupted-compass clusters.
pub fn compass_matrix(d: usize, p: f64) -> Result<Mat> {
    if d < 2 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
            range: "d >= 2",
        });
    }
    check_unit("p", p)?;
    let n = (2 * d) as f64;
    let q = 1.0 - p;
    let base = [[q, q, q / n], [1.0, 1.0 / n, 0.0], [0.0, 1.0, 1.0 / n]];
    Ok(base.map(|row| row.map(|x| (n - 1.0) * x)))
}

pub fn compass_spectral_radius(d: usize, p: f64) -> Result<f64> {
    Ok(spectral_radius_nonnegative(&compass_matrix(d, p)?))
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn apply_norm(a: &Mat, x: &[f64; 3]) -> f64 {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum::<f64>().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Spectral radius of a nonnegative 3×3 matrix by power iteration from
/// `(1,1,1)`.
///
/// The iterates `M^k x` are sampled at `k = 2^j`, obtained by repeated
/// squaring with rescaling, and `ρ ≈ (|M^k x| / |x|)^(1/k)`. Sampling at
/// doubling powers keeps the iteration short when the dominant eigenvalue
/// is defective, where the plain ratio only converges like `1/k`.
pub fn spectral_radius_nonnegative(m: &Mat) -> f64 {
    let x = [1.0; 3];
    let x_norm = 3f64.sqrt().ln();
    let mut a = *m;
    let mut log_scale = 0.0;
    let mut power = 1.0;
    let estimate = |a: &Mat, log_scale: f64, power: f64| {
        let n = apply_norm(a, &x);
        if n == 0.0 {
            0.0
        } else {
            ((log_scale + n.ln() - x_norm) / power).exp()
        }
    };
    let mut prev = estimate(&a, log_scale, power);
    for _ in 0..MAX_SQUARINGS {
        let sq = mul(&a, &a);
        let s = sq.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if s == 0.0 {
            return 0.0;
        }
        a = sq.map(|row| row.map(|v| v / s));
        log_scale = 2.0 * log_scale + s.ln();
        power *= 2.0;
        let next = estimate(&a, log_scale, power);
        if (next - prev).abs() <= POWER_TOLERANCE {
            return next;
        }
        prev = next;
    }
    prev
}

/// Bisection result for the density above which turquoise clusters are
/// finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompassThreshold {
    pub p: f64,
    /// Spectral radius at `p`.
    pub radius: f64,
    pub iterations: usize,
}

pub fn compass_threshold(d: usize) -> Result<CompassThreshold> {
    let f = |p: f64| compass_spectral_radius(d, p).map(|r| r - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::NoSignChange {
            what: "compass spectral radius - 1".into(),
            lo: f_lo,
            hi: f_hi,
        });
    }
    let mut iterations = 0;
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let p = 0.5 * (lo + hi);
    Ok(CompassThreshold {
        p,
        radius: compass_spectral_radius(d, p)?,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_entries() {
        let m = compass_matrix(2, 0.25).unwrap();
        assert_eq!(m[0], [2.25, 2.25, 0.5625]);
        assert_eq!(m[1], [3.0, 0.75, 0.0]);
        assert_eq!(m[2], [0.0, 3.0, 0.75]);
        assert!(compass_matrix(1, 0.5).is_err());
        assert!(compass_matrix(2, 1.5).is_err());
    }

    #[test]
    fn full_density_is_defective() {
        for d in 2..7 {
            let r = compass_spectral_radius(d, 1.0).unwrap();
            let want = (2 * d - 1) as f64 / (2 * d) as f64;
            assert!((r - want).abs() < 1e-9, "d={d}: {r}");
        }
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let diag = [[0.5, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((spectral_radius_nonnegative(&diag) - 2.0).abs() < 1e-9);
        let nil = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]];
        assert_eq!(spectral_radius_nonnegative(&nil), 0.0);
    }

    #[test]
    fn radius_nonincreasing_in_p() {
        for d in 2..5 {
            let r: Vec<f64> = (0..=20)
                .map(|i| compass_spectral_radius(d, i as f64 / 20.0).unwrap())
                .collect();
            assert!(r[0] > 1.0);
            assert!(r.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        }
    }

    #[test]
    fn threshold_is_a_root() {
        for d in 2..5 {
            let t = compass_threshold(d).unwrap();
            assert!(t.p > 0.0 && t.p < 1.0);
            assert!((t.radius - 1.0).abs() < 1e-6);
        }
    }
}

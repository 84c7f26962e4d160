//! Generic closed forms over `f64` or [`BigRational`].
//!
//! These functions perform no domain validation; the checked `f64` entry
//! points live in the parent module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow, Num};

pub trait Exact: Num + Clone + PartialOrd {
    fn int(value: i64) -> Self;
}

impl Exact for f64 {
    fn int(value: i64) -> Self {
        value as f64
    }
}

impl Exact for BigRational {
    fn int(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }
}

fn one<T: Exact>() -> T {
    T::int(1)
}

/// `1 - (1 - 1/(2d))^2`.
pub fn lambda_one_choice<T: Exact>(d: usize) -> T {
    let miss = one::<T>() - one::<T>() / T::int(2 * d as i64);
    one::<T>() - miss.clone() * miss
}

/// `p + (1-p)(1 - (1-λ)^d)` with `λ` the one-choice edge probability.
pub fn vertex_blue_prob_one_choice<T: Exact>(d: usize, p: T) -> T {
    let lam = lambda_one_choice::<T>(d);
    let q = one::<T>() - p.clone();
    p + q * (one::<T>() - pow(one::<T>() - lam, d))
}

/// `1 - (1 + p/d)(1-λ)`.
pub fn collinear_pair_prob_one_choice<T: Exact>(d: usize, p: T) -> T {
    let lam = lambda_one_choice::<T>(d);
    one::<T>() - (one::<T>() + p / T::int(d as i64)) * (one::<T>() - lam)
}

/// `λ^2 - p(2d-1)^2/(2d)^4`.
pub fn perp_pair_prob_one_choice<T: Exact>(d: usize, p: T) -> T {
    let lam = lambda_one_choice::<T>(d);
    let odd = T::int(2 * d as i64 - 1);
    let even = T::int(2 * d as i64);
    lam.clone() * lam - p * odd.clone() * odd / pow(even, 4)
}

/// `1 - (1-λ)^d + p((1-λ)^d - (1-λ)^(2d))`.
pub fn vertex_blue_prob_independent<T: Exact>(d: usize, p: T, lambda: T) -> T {
    let miss = one::<T>() - lambda;
    let m_d = pow(miss.clone(), d);
    let m_2d = pow(miss, 2 * d);
    one::<T>() - m_d.clone() + p * (m_d - m_2d)
}

/// `(1-p)^k`.
pub fn collinear_corr_independent<T: Exact>(p: T, k: usize) -> T {
    pow(one::<T>() - p, k)
}

/// `((2d-1)λ/p, 2(d-1)λ/p)`.
pub fn branching_means<T: Exact>(d: usize, p: T, lambda: T) -> (T, T) {
    let mu1 = T::int(2 * d as i64 - 1) * lambda.clone() / p.clone();
    let mu2 = T::int(2 * (d as i64 - 1)) * lambda / p;
    (mu1, mu2)
}

/// `1 - [1 - (λ/q)(q^(2r)(1 - q^span))^2]^count`, the shared shape of the
/// block crossing events.
pub fn block_event<T: Exact>(q: T, lambda: T, r: usize, span: usize, count: usize) -> T {
    let inner = pow(q.clone(), 2 * r) * (one::<T>() - pow(q.clone(), span));
    let hit = lambda / q * inner.clone() * inner;
    one::<T>() - pow(one::<T>() - hit, count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_values() {
        assert_eq!(lambda_one_choice::<BigRational>(2), rat(7, 16));
        assert_eq!(lambda_one_choice::<BigRational>(3), rat(11, 36));
        assert_eq!(vertex_blue_prob_one_choice(2, rat(1, 2)), rat(431, 512));
        assert_eq!(collinear_pair_prob_one_choice(2, rat(1, 1)), rat(5, 32));
        assert_eq!(perp_pair_prob_one_choice(2, rat(1, 1)), rat(5, 32));
        assert_eq!(collinear_pair_prob_one_choice(2, rat(0, 1)), rat(7, 16));
        assert_eq!(perp_pair_prob_one_choice(2, rat(0, 1)), rat(49, 256));
        assert_eq!(vertex_blue_prob_independent(2, rat(1, 1), rat(1, 2)), rat(15, 16));
        assert_eq!(collinear_corr_independent(rat(1, 2), 3), rat(1, 8));
        assert_eq!(block_event(rat(1, 2), rat(7, 16), 1, 1, 1), rat(7, 512));
        assert_eq!(block_event(rat(1, 2), rat(1, 1), 1, 1, 1), rat(1, 32));
    }
}

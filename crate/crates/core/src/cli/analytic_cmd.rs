use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AnalyticArgs, CmdResult, Failure, EXIT_OK};
use crate::analytic::{self, exact, BlockParams, RegionConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    LambdaOneChoice,
    VertexOneChoice,
    CollinearOneChoice,
    PerpOneChoice,
    VertexIndependent,
    CorrIndependent,
    Branching,
    CompassRadius,
    CompassThreshold,
    BlockR,
    BlockA,
    BlockC,
    GoodBlock,
    Region,
}

/// Exact value of a decimal (`0.4375`), fraction (`7/16`) or integer.
fn parse_exact(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        return (!d.is_zero()).then(|| BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let value = BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    Some(if neg { -value } else { value })
}

/// `x` with 17 significant digits.
fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let decimals = (16 - x.abs().log10().floor() as i64).max(0) as usize;
    format!("{x:.decimals$}")
}

fn show_exact(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

struct Inputs {
    d: Option<usize>,
    p: Option<(f64, Option<BigRational>)>,
    lambda: Option<(f64, Option<BigRational>)>,
}

fn number(
    name: &str,
    s: &Option<String>,
) -> std::result::Result<Option<(f64, Option<BigRational>)>, Failure> {
    s.as_ref()
        .map(|s| {
            let f: f64 = s
                .parse()
                .ok()
                .or_else(|| parse_exact(s).map(|r| ratio_f64(&r)))
                .ok_or_else(|| Failure::usage(format!("--{name}: cannot parse {s:?}")))?;
            Ok((f, parse_exact(s)))
        })
        .transpose()
}

fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn need<T: Clone>(name: &str, v: &Option<T>) -> std::result::Result<T, Failure> {
    v.clone()
        .ok_or_else(|| Failure::usage(format!("--{name} is required for this formula")))
}

/// Value of the requested formula as printed by the CLI.
pub fn evaluate_formula(a: &AnalyticArgs) -> std::result::Result<String, Failure> {
    let mut inp = Inputs {
        d: a.d,
        p: number("p", &a.p)?,
        lambda: number("lambda", &a.lambda)?,
    };
    if let Some((q, qx)) = number("q", &a.q)? {
        if inp.p.is_some() {
            return Err(Failure::usage("give only one of --p and --q"));
        }
        inp.p = Some((1.0 - q, qx.map(|q| BigRational::one() - q)));
    }
    let d = || need("d", &inp.d);
    let p = || need("p", &inp.p);
    let lam = || need("lambda", &inp.lambda);
    // Float value (validated) and, when all inputs are exact, the exact value.
    let out: (String, Option<BigRational>) = match a.formula {
        Formula::LambdaOneChoice => {
            let d = d()?;
            (
                sig17(analytic::lambda_one_choice(d)?),
                Some(exact::lambda_one_choice(d)),
            )
        }
        Formula::VertexOneChoice => {
            let (d, (pf, px)) = (d()?, p()?);
            (
                sig17(analytic::vertex_blue_prob_one_choice(d, pf)?),
                px.map(|p| exact::vertex_blue_prob_one_choice(d, p)),
            )
        }
        Formula::CollinearOneChoice => {
            let (d, (pf, px)) = (d()?, p()?);
            (
                sig17(analytic::collinear_pair_prob_one_choice(d, pf)?),
                px.map(|p| exact::collinear_pair_prob_one_choice(d, p)),
            )
        }
        Formula::PerpOneChoice => {
            let (d, (pf, px)) = (d()?, p()?);
            (
                sig17(analytic::perp_pair_prob_one_choice(d, pf)?),
                px.map(|p| exact::perp_pair_prob_one_choice(d, p)),
            )
        }
        Formula::VertexIndependent => {
            let (d, (pf, px), (lf, lx)) = (d()?, p()?, lam()?);
            (
                sig17(analytic::vertex_blue_prob_independent(d, pf, lf)?),
                px.zip(lx)
                    .map(|(p, l)| exact::vertex_blue_prob_independent(d, p, l)),
            )
        }
        Formula::CorrIndependent => {
            let ((pf, px), k) = (p()?, need("k", &a.k)?);
            (
                sig17(analytic::collinear_corr_independent(pf, k)?),
                px.map(|p| exact::collinear_corr_independent(p, k)),
            )
        }
        Formula::Branching => {
            let (d, (pf, px), (lf, lx)) = (d()?, p()?, lam()?);
            let b = analytic::branching_means(d, pf, lf)?;
            let text = match px.zip(lx) {
                Some((p, l)) => {
                    let (m1, m2) = exact::branching_means(d, p, l);
                    format!("mu1={} mu2={}", show_exact(&m1), show_exact(&m2))
                }
                None => format!("mu1={} mu2={}", sig17(b.occupied), sig17(b.unoccupied)),
            };
            return Ok(format!("{text} subcritical={}", b.subcritical));
        }
        Formula::CompassRadius => (sig17(analytic::compass_spectral_radius(d()?, p()?.0)?), None),
        Formula::CompassThreshold => (sig17(analytic::compass_threshold(d()?)?.p), None),
        Formula::BlockR => return Ok(analytic::block_r(p()?.0)?.to_string()),
        Formula::BlockA | Formula::BlockC | Formula::GoodBlock => {
            let ((pf, px), (lf, lx), r) = (p()?, lam()?, need("r", &a.r)?);
            let bp = BlockParams::from_q(r, 1.0 - pf, lf)?;
            let float = match a.formula {
                Formula::BlockA => analytic::block_event_a_prob(&bp),
                Formula::BlockC => analytic::block_event_c_prob(&bp)?,
                _ => analytic::good_block_lower_bound(&bp)?,
            };
            let exact = px.zip(lx).map(|(p, l)| {
                let q = BigRational::one() - p;
                let a_prob = exact::block_event(q.clone(), l.clone(), r, r, r);
                let c_prob = exact::block_event(q, l, r, 2 * r / 3, 2 * r / 3);
                match a.formula {
                    Formula::BlockA => a_prob,
                    Formula::BlockC => c_prob,
                    _ => {
                        let one = BigRational::one();
                        let four = BigRational::from_integer(4.into());
                        let v = one.clone()
                            - four.clone() * (one.clone() - a_prob)
                            - four * (one.clone() - c_prob);
                        v.clamp(BigRational::zero(), one)
                    }
                }
            });
            (sig17(float), exact)
        }
        Formula::Region => {
            let (d, (pf, _), (lf, _)) = (d()?, p()?, lam()?);
            let mut cfg = RegionConfig::for_dim(d);
            cfg.log_constant = a.c;
            return Ok(analytic::classify_region(d, pf, lf, &cfg)?.to_string());
        }
    };
    Ok(match out {
        (_, Some(x)) => show_exact(&x),
        (f, None) => f,
    })
}

pub fn cmd_analytic(a: &AnalyticArgs) -> CmdResult {
    println!("{}", evaluate_formula(a)?);
    Ok(EXIT_OK)
}

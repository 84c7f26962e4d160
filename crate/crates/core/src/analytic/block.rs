use super::exact;
use crate::error::{check_density, check_unit};
use crate::{Error, Result};

/// Parameters of the renormalisation block of side `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockParams {
    pub r: usize,
    pub p: f64,
    pub q: f64,
    pub lambda: f64,
}

impl BlockParams {
    pub fn new(r: usize, p: f64, lambda: f64) -> Result<Self> {
        if r == 0 {
            return Err(Error::Domain {
                name: "r",
                value: 0.0,
                range: "r >= 1",
            });
        }
        check_unit("lambda", lambda)?;
        let q = 1.0 - p;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                range: "(0, 1)",
            });
        }
        Ok(Self { r, p, q, lambda })
    }

    /// Parameters given the vacancy density `q` directly.
    pub fn from_q(r: usize, q: f64, lambda: f64) -> Result<Self> {
        let mut bp = Self::new(r, 1.0 - q, lambda)?;
        bp.q = q;
        Ok(bp)
    }
}

/// Block side with `q^r` closest to one half.
pub fn block_r(p: f64) -> Result<usize> {
    check_density(p)?;
    let q = 1.0 - p;
    if q == 0.0 {
        return Ok(1);
    }
    let r = (1.0 / (1.0 / q).log2()).round();
    Ok((r as usize).max(1))
}

/// Probability that some vertical blue segment links the two target strips
/// of a block face.
pub fn block_event_a_prob(bp: &BlockParams) -> f64 {
    exact::block_event(bp.q, bp.lambda, bp.r, bp.r, bp.r)
}

/// Probability of a blue horizontal link between neighbouring blocks.
pub fn block_event_c_prob(bp: &BlockParams) -> Result<f64> {
    if !bp.r.is_multiple_of(3) {
        return Err(Error::BlockMultiple(bp.r));
    }
    let third = 2 * bp.r / 3;
    Ok(exact::block_event(bp.q, bp.lambda, bp.r, third, third))
}

/// Union bound on the probability that a block is good, clamped to `[0,1]`.
pub fn good_block_lower_bound(bp: &BlockParams) -> Result<f64> {
    let a = block_event_a_prob(bp);
    let c = block_event_c_prob(bp)?;
    Ok((1.0 - 4.0 * (1.0 - a) - 4.0 * (1.0 - c)).clamp(0.0, 1.0))
}

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use bitvec::prelude::*;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{make_geometry, Boundary, Direction, Geometry, RngStream, StreamRole};
use crate::error::check_density;
use crate::{Error, Result};

/// Largest tolerated probability that a gap scan wraps all the way round a
/// torus line, `(1-p)^(L-2)`.
pub const BIAS_LIMIT: f64 = 1e-12;

/// `(1-p)^(L-2)`, the chance that a torus line of side `L` is empty apart
/// from two given sites.
pub fn bias_bound(p: f64, side: usize) -> f64 {
    (1.0 - p).powi(side as i32 - 2)
}

/// Site occupancy over a finite window.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteConfig {
    geometry: Geometry,
    occupied: BitVec<u8, Lsb0>,
    p: f64,
    site_seed: u64,
}

/// i.i.d. Bernoulli(`p`) occupancy, a pure function of `(geometry, p, site_seed)`.
///
/// One uniform is drawn per site in index order and compared with `p`, so
/// configurations sampled from the same seed are monotone in `p`.
pub fn sample_sites(geometry: &Geometry, p: f64, site_seed: u64) -> Result<SiteConfig> {
    check_density(p)?;
    let mut rng = RngStream::new(site_seed, StreamRole::Sites as u64).rng();
    let n = geometry.site_count();
    let mut occupied = BitVec::with_capacity(n);
    for _ in 0..n {
        occupied.push(rng.gen::<f64>() < p);
    }
    Ok(SiteConfig {
        geometry: geometry.clone(),
        occupied,
        p,
        site_seed,
    })
}

impl SiteConfig {
    /// Configuration with an explicit occupancy pattern (seed recorded as 0).
    pub fn from_occupancy(geometry: &Geometry, occupied: &[bool], p: f64) -> Result<Self> {
        if occupied.len() != geometry.site_count() {
            return Err(Error::Geometry(format!(
                "{} occupancy flags for {} sites",
                occupied.len(),
                geometry.site_count()
            )));
        }
        Ok(Self {
            geometry: geometry.clone(),
            occupied: occupied.iter().copied().collect(),
            p,
            site_seed: 0,
        })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn site_seed(&self) -> u64 {
        self.site_seed
    }

    #[inline]
    pub fn is_occupied(&self, site: usize) -> bool {
        self.occupied[site]
    }

    pub fn occupied_count(&self) -> usize {
        self.occupied.count_ones()
    }

    pub fn occupied_sites(&self) -> impl Iterator<Item = usize> + '_ {
        self.occupied.iter_ones()
    }

    pub fn bits(&self) -> &BitSlice<u8, Lsb0> {
        &self.occupied
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SiteConfigDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<SiteConfigDoc>(text)?.try_into()
    }
}

/// Scan from `site` along `dir` for the next occupied site, excluding `site`.
///
/// Returns the site found (if any) and the number of unoccupied sites passed.
/// On a torus the scan gives up on returning to `site` (gap `L - 1`); in a
/// free box it gives up at the boundary (gap = distance to the boundary).
pub fn next_occupied(config: &SiteConfig, site: usize, dir: Direction) -> Result<(Option<usize>, usize)> {
    let g = &config.geometry;
    if site >= g.site_count() || dir.axis >= g.dim() {
        return Err(Error::SiteIndex(site));
    }
    let mut gap = 0;
    let mut cur = site;
    while let Some(next) = g.step(cur, dir) {
        if next == site {
            break;
        }
        if config.is_occupied(next) {
            return Ok((Some(next), gap));
        }
        gap += 1;
        cur = next;
    }
    Ok((None, gap))
}

/// JSON form: header fields plus the occupancy bit-field, little-endian bit
/// order within bytes, base64-encoded.
#[derive(Serialize, Deserialize)]
pub(crate) struct SiteConfigDoc {
    pub d: usize,
    pub lengths: Vec<usize>,
    pub boundary: Boundary,
    pub p: f64,
    pub site_seed: u64,
    pub occupied: String,
}

impl From<&SiteConfig> for SiteConfigDoc {
    fn from(c: &SiteConfig) -> Self {
        Self {
            d: c.geometry.dim(),
            lengths: c.geometry.lengths().to_vec(),
            boundary: c.geometry.boundary(),
            p: c.p,
            site_seed: c.site_seed,
            occupied: encode_bits(&c.occupied),
        }
    }
}

impl TryFrom<SiteConfigDoc> for SiteConfig {
    type Error = Error;

    fn try_from(doc: SiteConfigDoc) -> Result<Self> {
        let geometry = make_geometry(doc.d, &doc.lengths, doc.boundary)?;
        let occupied = decode_bits(&doc.occupied, geometry.site_count())?;
        Ok(Self {
            geometry,
            occupied,
            p: doc.p,
            site_seed: doc.site_seed,
        })
    }
}

pub(crate) fn encode_bits(bits: &BitSlice<u8, Lsb0>) -> String {
    let mut owned: BitVec<u8, Lsb0> = bits.to_bitvec();
    owned.set_uninitialized(false);
    B64.encode(owned.as_raw_slice())
}

pub(crate) fn decode_bits(text: &str, len: usize) -> Result<BitVec<u8, Lsb0>> {
    let bytes = B64
        .decode(text)
        .map_err(|e| Error::Artifact(format!("bit-field is not base64: {e}")))?;
    if bytes.len() != len.div_ceil(8) {
        return Err(Error::Artifact(format!(
            "bit-field has {} bytes, expected {}",
            bytes.len(),
            len.div_ceil(8)
        )));
    }
    let mut bits = BitVec::<u8, Lsb0>::from_vec(bytes);
    if bits[len..].any() {
        return Err(Error::Artifact("padding bits set".into()));
    }
    bits.truncate(len);
    Ok(bits)
}

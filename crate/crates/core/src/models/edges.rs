use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lattice::sites::{decode_bits, encode_bits};
use crate::lattice::{make_geometry, Boundary, Geometry};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    OneChoice,
    Independent,
    Turquoise,
    Mixed,
    MixedDerived,
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelTag::OneChoice => "one-choice",
            ModelTag::Independent => "independent",
            ModelTag::Turquoise => "turquoise",
            ModelTag::Mixed => "mixed",
            ModelTag::MixedDerived => "mixed-derived",
        })
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "one-choice" => ModelTag::OneChoice,
            "independent" => ModelTag::Independent,
            "turquoise" => ModelTag::Turquoise,
            "mixed" => ModelTag::Mixed,
            "mixed-derived" => ModelTag::MixedDerived,
            _ => return Err(Error::InvalidEvent(format!("unknown model {s:?}"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub site_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color_seed: Option<u64>,
}

/// One flag per edge slot of the geometry, with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct BlueEdgeSet {
    geometry: Geometry,
    blue: BitVec<u8, Lsb0>,
    pub model: ModelTag,
    pub params: ModelParams,
    pub seeds: Seeds,
}

impl BlueEdgeSet {
    pub fn empty(geometry: &Geometry, model: ModelTag, params: ModelParams, seeds: Seeds) -> Self {
        Self {
            geometry: geometry.clone(),
            blue: bitvec![u8, Lsb0; 0; geometry.edge_slots()],
            model,
            params,
            seeds,
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    #[inline]
    pub fn is_blue(&self, edge: usize) -> bool {
        self.blue[edge]
    }

    #[inline]
    pub fn set(&mut self, edge: usize) {
        self.blue.set(edge, true);
    }

    #[inline]
    pub fn clear(&mut self, edge: usize) {
        self.blue.set(edge, false);
    }

    pub fn count(&self) -> usize {
        self.blue.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.blue.not_any()
    }

    /// Blue edges divided by the number of edges in the window.
    pub fn fraction(&self) -> f64 {
        self.count() as f64 / self.geometry.edge_count() as f64
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.blue.iter_ones()
    }

    pub fn bits(&self) -> &BitSlice<u8, Lsb0> {
        &self.blue
    }

    pub fn is_subset_of(&self, other: &BlueEdgeSet) -> bool {
        self.geometry == other.geometry && self.edges().all(|e| other.is_blue(e))
    }

    /// Edges present here but missing from `other`.
    pub fn difference(&self, other: &BlueEdgeSet) -> Vec<usize> {
        self.edges().filter(|&e| !other.is_blue(e)).collect()
    }

    /// Sites incident to at least one blue edge.
    pub fn blue_sites(&self) -> BitVec<u8, Lsb0> {
        let mut sites = bitvec![u8, Lsb0; 0; self.geometry.site_count()];
        for e in self.edges() {
            if let Some((u, v)) = self.geometry.edge_endpoints(e) {
                sites.set(u, true);
                sites.set(v, true);
            }
        }
        sites
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&BlueEdgeSetDoc::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<BlueEdgeSetDoc>(text)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct BlueEdgeSetDoc {
    pub d: usize,
    pub lengths: Vec<usize>,
    pub boundary: Boundary,
    pub model: ModelTag,
    pub params: ModelParams,
    pub seeds: Seeds,
    pub blue: String,
}

impl From<&BlueEdgeSet> for BlueEdgeSetDoc {
    fn from(s: &BlueEdgeSet) -> Self {
        Self {
            d: s.geometry.dim(),
            lengths: s.geometry.lengths().to_vec(),
            boundary: s.geometry.boundary(),
            model: s.model,
            params: s.params,
            seeds: s.seeds,
            blue: encode_bits(&s.blue),
        }
    }
}

impl TryFrom<BlueEdgeSetDoc> for BlueEdgeSet {
    type Error = Error;

    fn try_from(doc: BlueEdgeSetDoc) -> Result<Self> {
        let geometry = make_geometry(doc.d, &doc.lengths, doc.boundary)?;
        let blue = decode_bits(&doc.blue, geometry.edge_slots())?;
        if blue.iter_ones().any(|e| geometry.edge_endpoints(e).is_none()) {
            return Err(Error::Artifact("blue flag on a non-existent edge".into()));
        }
        Ok(Self {
            geometry,
            blue,
            model: doc.model,
            params: doc.params,
            seeds: doc.seeds,
        })
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{check_density, check_unit};
use crate::lattice::{derive_seed, sample_sites, Geometry, StreamRole};
use crate::models::{
    corrupted_compass_turquoise, feasible_segments, independent_blue, mixed_percolation, one_choice_blue,
    restrict_independent_to_occupied_pairs, BlueEdgeSet, ChoiceAssignment, ModelTag,
};
use crate::{Error, Result};

/// A model with its parameters, independent of the window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model: ModelTag,
    pub d: usize,
    pub p: f64,
    #[serde(default)]
    pub lambda: Option<f64>,
}

impl ModelSpec {
    pub fn one_choice(d: usize, p: f64) -> Self {
        Self {
            model: ModelTag::OneChoice,
            d,
            p,
            lambda: None,
        }
    }

    pub fn independent(d: usize, p: f64, lambda: f64) -> Self {
        Self {
            model: ModelTag::Independent,
            d,
            p,
            lambda: Some(lambda),
        }
    }

    pub fn mixed(d: usize, p: f64, lambda: f64) -> Self {
        Self {
            model: ModelTag::Mixed,
            d,
            p,
            lambda: Some(lambda),
        }
    }

    pub fn needs_lambda(&self) -> bool {
        matches!(
            self.model,
            ModelTag::Independent | ModelTag::Mixed | ModelTag::MixedDerived
        )
    }

    /// Whether blue edges can come from feasible segments longer than one
    /// edge, so that a small torus biases local statistics.
    pub fn uses_segments(&self) -> bool {
        !matches!(self.model, ModelTag::Mixed | ModelTag::MixedDerived)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(Error::Domain {
                name: "d",
                value: 0.0,
                range: "d >= 1",
            });
        }
        check_density(self.p)?;
        match (self.needs_lambda(), self.lambda) {
            (true, None) => Err(Error::InvalidEvent(format!(
                "model {} requires lambda",
                self.model
            ))),
            (_, Some(l)) => check_unit("lambda", l),
            (false, None) => Ok(()),
        }
    }

    pub(crate) fn with_p(&self, p: f64) -> Self {
        Self { p, ..self.clone() }
    }

    pub(crate) fn with_lambda(&self, lambda: f64) -> Self {
        Self {
            lambda: Some(lambda),
            ..self.clone()
        }
    }

    /// Blue edges of replicate `replicate` on `geometry`.
    ///
    /// Site uniforms come from the replicate's site stream and colour
    /// randomness from its choice or colour stream, so two specs differing
    /// only in `p` or `λ` share their randomness.
    pub fn sample(&self, geometry: &Geometry, master_seed: u64, replicate: u64) -> Result<BlueEdgeSet> {
        let site_seed = derive_seed(master_seed, replicate, StreamRole::Sites);
        let choice_seed = derive_seed(master_seed, replicate, StreamRole::Choices);
        let color_seed = derive_seed(master_seed, replicate, StreamRole::Colors);
        let config = sample_sites(geometry, self.p, site_seed)?;
        let lambda = self.lambda.unwrap_or(0.0);
        match self.model {
            ModelTag::OneChoice => {
                let segs = feasible_segments(&config);
                Ok(one_choice_blue(&config, &segs, choice_seed).1)
            }
            ModelTag::Turquoise => {
                let choices = ChoiceAssignment::draw(&config, choice_seed);
                Ok(corrupted_compass_turquoise(&config, &choices))
            }
            ModelTag::Independent => {
                let segs = feasible_segments(&config);
                independent_blue(&config, &segs, lambda, color_seed)
            }
            ModelTag::MixedDerived => {
                let segs = feasible_segments(&config);
                let blue = independent_blue(&config, &segs, lambda, color_seed)?;
                Ok(restrict_independent_to_occupied_pairs(&config, &blue))
            }
            ModelTag::Mixed => mixed_percolation(&config, lambda, color_seed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;

    #[test]
    fn validation() {
        assert!(ModelSpec::one_choice(2, 0.5).validate().is_ok());
        let mut s = ModelSpec::independent(2, 0.5, 0.3);
        s.lambda = None;
        assert!(matches!(s.validate(), Err(Error::InvalidEvent(_))));
        assert!(ModelSpec::independent(2, 0.5, 1.3).validate().is_err());
        assert!(ModelSpec::mixed(2, 0.0, 0.3).validate().is_err());
    }

    #[test]
    fn replicates_are_reproducible() {
        let g = Geometry::cube(2, 12, Boundary::Torus).unwrap();
        for spec in [
            ModelSpec::one_choice(2, 0.6),
            ModelSpec::independent(2, 0.6, 0.4),
            ModelSpec::mixed(2, 0.6, 0.4),
        ] {
            let a = spec.sample(&g, 5, 3).unwrap();
            let b = spec.sample(&g, 5, 3).unwrap();
            let c = spec.sample(&g, 5, 4).unwrap();
            assert_eq!(a, b);
            assert_ne!(a.bits(), c.bits());
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::lattice::Boundary;
use crate::models::ModelTag;
use crate::{Error, Result};

/// Mean over replicates with its standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    /// Sample standard deviation of the replicate values over `√replicates`.
    pub stderr: f64,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub per_replicate: Option<Vec<f64>>,
}

impl EstimateWithCI {
    pub fn from_values(values: Vec<f64>, master_seed: u64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::Domain {
                name: "replicates",
                value: n as f64,
                range: ">= 2",
            });
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Self {
            mean,
            stderr: (var / n as f64).sqrt(),
            replicates: n,
            master_seed,
            per_replicate: Some(values),
        })
    }

    /// Distance from `target` in units of the standard error; infinite if
    /// the error is zero and the mean differs.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.stderr
        }
    }

    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target) <= sigmas
    }

    pub fn without_values(mut self) -> Self {
        self.per_replicate = None;
        self
    }
}

pub(crate) fn check_replicates(replicates: usize) -> Result<()> {
    if replicates >= 2 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "replicates",
            value: replicates as f64,
            range: ">= 2",
        })
    }
}

pub const CSV_HEADER: &str = "model,d,L,boundary,p,lambda,replicates,metric,mean,stderr,master_seed";

/// One line of the estimate CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub model: ModelTag,
    pub d: usize,
    #[serde(rename = "L")]
    pub length: usize,
    pub boundary: Boundary,
    pub p: f64,
    pub lambda: Option<f64>,
    pub metric: String,
    pub estimate: EstimateWithCI,
}

impl CsvRow {
    fn line(&self) -> String {
        let lambda = self.lambda.map(|l| l.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.model,
            self.d,
            self.length,
            self.boundary,
            self.p,
            lambda,
            self.estimate.replicates,
            self.metric,
            self.estimate.mean,
            self.estimate.stderr,
            self.estimate.master_seed
        )
    }
}

/// Header plus one line per row, newline-terminated.
pub fn to_csv(rows: &[CsvRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.line());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_stderr() {
        let e = EstimateWithCI::from_values(vec![1.0, 0.0, 1.0, 0.0], 9).unwrap();
        assert_eq!(e.mean, 0.5);
        // sd = sqrt(1/3), n = 4
        assert!((e.stderr - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(EstimateWithCI::from_values(vec![1.0], 0).is_err());
        assert!(e.within(0.6, 1.0));
    }

    #[test]
    fn csv_format() {
        let e = EstimateWithCI::from_values(vec![0.25, 0.75], 3).unwrap();
        let row = CsvRow {
            model: ModelTag::Independent,
            d: 2,
            length: 64,
            boundary: Boundary::Torus,
            p: 0.8,
            lambda: Some(0.3),
            metric: "wrap_prob".into(),
            estimate: e,
        };
        let csv = to_csv(&[row]);
        assert_eq!(
            csv,
            format!("{CSV_HEADER}\nindependent,2,64,torus,0.8,0.3,2,wrap_prob,0.5,0.25,3\n")
        );
    }
}

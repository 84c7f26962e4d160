use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("parameter {name} = {value} outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("site index {0} out of range")]
    SiteIndex(usize),
    #[error("torus side {length} too small for p = {p}: (1-p)^(L-2) = {bias:e} must be below 1e-12")]
    BiasBound { length: usize, p: f64, bias: f64 },
    #[error("invalid event/model combination: {0}")]
    InvalidEvent(String),
    #[error("block side r = {0} must be a multiple of 3 for the C event")]
    BlockMultiple(usize),
    #[error("no sign change of {what} on [{lo}, {hi}]")]
    NoSignChange { what: String, lo: f64, hi: f64 },
    #[error("wrapping probability not monotone at L = {length}: {detail}")]
    NonMonotone { length: usize, detail: String },
    #[error("malformed artifact: {0}")]
    Artifact(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

pub(crate) fn check_density(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "p",
            value: p,
            range: "(0, 1]",
        })
    }
}

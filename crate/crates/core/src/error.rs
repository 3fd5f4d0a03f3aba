use thiserror::Error;

/// Failure modes shared by every geometric and metric operation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("point ({re}, {im}) is not interior to the domain")]
    PointOutsideDomain { re: f64, im: f64 },

    #[error("operation requires a bounded domain")]
    UnboundedDomain,

    #[error("domain is not eligible for the Apollonian weak metric: {0}")]
    IneligibleDomain(String),

    #[error("operation is not defined on this domain: {0}")]
    UnsupportedDomain(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("search failed after {0} trials")]
    SearchFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside(p: crate::Point2) -> Self {
        Error::PointOutsideDomain { re: p.re, im: p.im }
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision too low: {bits} bits requested, at least {min} required")]
    PrecisionTooLow { bits: u32, min: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole of {function} at {location}")]
    Pole { function: String, location: String },

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("zero too close to boundary near {location}")]
    BoundaryProximity { location: String },

    #[error("pole in region at {location}")]
    PoleInRegion { location: String },

    #[error("no convergence after {iterations} iterations (best iterate {best}, residual {residual})")]
    NoConvergence {
        iterations: usize,
        best: String,
        residual: String,
    },

    #[error("denominator vanishes at {0}")]
    DenominatorZero(String),

    #[error("higher-order pole (order {order}) along z{index}-z{next}=1 in term {term}")]
    HigherOrderPole {
        order: i32,
        index: usize,
        next: usize,
        term: String,
    },

    #[error("clearing factor not found: {0}")]
    ClearingFactor(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("size overflow: {0}")]
    SizeOverflow(String),

    #[error("unknown function id {0:?}")]
    UnknownFunction(String),
}

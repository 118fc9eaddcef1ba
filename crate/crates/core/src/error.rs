use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    QuadratureNotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("{what}: argument {value} is outside the supported domain ({detail})")]
    Domain {
        what: &'static str,
        value: f64,
        detail: &'static str,
    },

    #[error("{method} supports at most {max} points or rows, got {n}{hint}")]
    Size {
        method: &'static str,
        n: usize,
        max: usize,
        hint: &'static str,
    },

    #[error(
        "blocks overlap: block {first} ends at level {first_end} \
         but block {second} starts at level {second_start}"
    )]
    BlocksOverlap {
        first: usize,
        second: usize,
        first_end: u64,
        second_start: u64,
    },

    #[error("invalid block specification: {0}")]
    InvalidBlocks(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sampler failure: {0}")]
    Sampler(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, detail: &'static str) -> Self {
        Error::Domain { what, value, detail }
    }
}

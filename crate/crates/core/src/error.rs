use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The pair `(r, s)` lies outside `r >= s >= 1`.
    #[error("unsupported exponents r={r}, s={s}: require r >= s >= 1")]
    Unsupported { r: u32, s: u32 },
    #[error("index {k} outside the admissible range {lo}..={hi}")]
    OutOfRange { k: u32, lo: u32, hi: u32 },
    #[error("normal form term a†^{i} a^{j} violates the excess-degree invariant (expected i - j = {expected})")]
    Malformed { i: u32, j: u32, expected: u32 },
    #[error("alternating sum did not collapse to a non-negative integer")]
    NonIntegerResult,
    #[error("target error unreachable at {bits} bits of working precision")]
    PrecisionExhausted { bits: u32 },
    #[error("series terms stopped decreasing after {terms} terms")]
    Divergent { terms: u64 },
    #[error("density is defined on x > 0 only")]
    Domain,
    #[error("the n = 0 moment is not defined for a measure whose mass differs from 1")]
    UnsupportedMoment,
    #[error("no weight function is available for (r, s) = ({r}, {s})")]
    UnsupportedFamily { r: u32, s: u32 },
    #[error("ratio estimates have not stabilized by n = {max_n}")]
    Inconclusive { max_n: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

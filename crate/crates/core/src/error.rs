use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("B must not contain 1")]
    ContainsOne,
    #[error("period lcm {period} exceeds cap {cap}")]
    PeriodTooLarge { period: String, cap: u64 },
    #[error("{count} elements exceed the inclusion-exclusion cap {cap}")]
    SubsetBlowup { count: usize, cap: usize },
    #[error("tail bound unavailable: {0}")]
    TailUnavailable(String),
    #[error("{what} would exceed the cap {cap}")]
    Blowup { what: String, cap: usize },
    #[error("requested range reaches {requested}, beyond the enumeration bound {bound}")]
    BeyondEnumerationBound { requested: u64, bound: u64 },
    #[error("block length {0} is outside the supported range 1..=63")]
    BlockLength(usize),
    #[error("word of length {len} is too short for radius {radius}")]
    TooShort { len: usize, radius: usize },
    #[error("code table is not total on its domain: {0}")]
    PartialTable(String),
    #[error("block {0} lies outside the code's domain")]
    OffDomain(String),
    #[error("code maps the all-zero block to 1; the image of a finite configuration has infinite support")]
    NonVanishingAtZero,
    #[error("b0 precondition violated: {0}")]
    PreconditionB0(String),
    #[error("word {0} is not admissible")]
    NotAdmissible(String),
    #[error("coprimality failure: {0}")]
    CoprimalityFailure(String),
    #[error("not enough moduli: {0}")]
    InsufficientModuli(String),
    #[error("monotone witness exists: {0:?}")]
    WitnessExists(Vec<i64>),
    #[error("enumeration too shallow: {0}")]
    EnumerationTooShallow(String),
    #[error("source {0} is not hereditary")]
    NonHereditarySource(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
    #[error("position arithmetic overflowed")]
    Overflow,
    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by a configured size cap rather than bad input.
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(
            self,
            Error::PeriodTooLarge { .. }
                | Error::SubsetBlowup { .. }
                | Error::Blowup { .. }
                | Error::BeyondEnumerationBound { .. }
                | Error::EnumerationTooShallow(_)
                | Error::Overflow
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has no numerical kernel (smallest singular value {0:e})")]
    NoKernel(f64),
    #[error("numerical kernel has dimension {0}, expected 1")]
    AmbiguousKernel(usize),
    #[error("kernel vector vanishes at pivot index {0}")]
    PivotVanishes(usize),
    #[error("power iteration did not converge after {0} iterations")]
    NonConvergence(usize),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("label index {0} out of range")]
    LabelOutOfRange(usize),
    #[error("fusion multiplicity {mult} for ({a}, {b}, {c}) is unsupported; only 0 or 1 allowed")]
    MultiplicityUnsupported {
        a: String,
        b: String,
        c: String,
        mult: u32,
    },
    #[error("missing entry {0}")]
    MissingEntry(String),
    #[error("entry {0} is not admissible")]
    InadmissibleEntry(String),
    #[error("missing gauge entry {0}")]
    MissingGaugeEntry(String),
    #[error("triple {0} is not admissible")]
    InadmissibleTriple(String),
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("R-symbol {0} is zero")]
    ZeroRSymbol(String),

    #[error("no consistent ribbon twist (balancing {balancing:e}, ribbon {ribbon:e})")]
    NoConsistentTwist { balancing: f64, ribbon: f64 },
    #[error("quantum dimensions violate multiplicativity (max deviation {0:e})")]
    MultiplicativityViolation(f64),
    #[error("seed twist is not a ribbon structure (balancing {balancing:e}, ribbon {ribbon:e})")]
    InvalidSeed { balancing: f64, ribbon: f64 },
    #[error("quantum dimension of `{0}` is numerically zero")]
    DegenerateDimension(String),
    #[error("no unitary ribbon structure")]
    NoUnitaryRibbon,
    #[error("{0} unitary ribbon structures found, expected exactly one")]
    MultipleUnitaryRibbons(usize),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("unknown catalog model `{0}`")]
    UnknownModel(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

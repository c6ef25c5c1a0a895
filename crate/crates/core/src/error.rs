use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown domain tag `{0}` (expected z<n>, nat, qplus or unit)")]
    UnknownDomain(String),
    #[error("residue modulus must be at least 2, got {0}")]
    BadModulus(u64),
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: String, right: String },
    #[error("{0} leaves the unit interval")]
    DomainOverflow(String),
    #[error("domain {0} has no order; min and max are undefined")]
    UnorderedDomain(String),
    #[error("endpoint {value} is not valid in {domain}")]
    InvalidEndpoint { value: String, domain: String },
    #[error("{op} is not defined on {domain} matrices")]
    UnsupportedInDomain { op: &'static str, domain: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("matrices are not of the same type: {0}")]
    TypeMismatch(String),
    #[error("not conformable: {0}")]
    NotConformable(String),
    #[error("partitions do not conform: {0}")]
    PartitionMismatch(String),
    #[error("scalar {0} is outside [0,1]")]
    ScalarOutOfRange(String),
    #[error("eta image of {0} escapes [0,1]")]
    ImageEscape(String),
    #[error("carrier is empty")]
    CarrierEmpty,
    #[error("invalid carrier: {0}")]
    InvalidCarrier(String),
    #[error("generator {0} is outside the carrier")]
    GeneratorOutsideCarrier(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("map undefined on {0}")]
    MapUndefined(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: column cuts {found:?} differ from {expected:?} on earlier rows")]
    InconsistentCuts { line: usize, expected: Vec<usize>, found: Vec<usize> },
    #[error("line {line}, column {column}: bad endpoint `{token}`: {reason}")]
    BadEndpoint { line: usize, column: usize, token: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

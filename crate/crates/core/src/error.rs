use thiserror::Error;

/// Errors raised by the group, table and report machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group enumeration exceeded the order cap of {cap} elements")]
    OrderCapExceeded { cap: usize },
    #[error("generator of degree {found} does not match group degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("image array is not a permutation of 0..{degree}")]
    NotAPermutation { degree: usize },
    #[error("group is not solvable")]
    NotSolvable,
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("solvable radical is nontrivial (order {order})")]
    NonTrivialRadical { order: usize },
    #[error("normal subgroup lattice exceeded the cap of {cap} subgroups")]
    LatticeCapExceeded { cap: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("element set is not a subgroup of the parent group")]
    NotSubgroup,
    #[error("no suitable prime found for the modular eigenspace computation")]
    NoSuitablePrime,
    #[error("character table verification failed: {0}")]
    VerificationFailed(String),
    #[error("union of character fibers is empty")]
    EmptySet,
    #[error("normal subgroup is trivial, so no character lies above it")]
    TrivialN,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("tuple space of {count} exceeds the cap of {cap}")]
    TupleCapExceeded { count: u128, cap: u128 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the errors that signal an exhausted resource cap.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            Error::OrderCapExceeded { .. } | Error::LatticeCapExceeded { .. } | Error::TupleCapExceeded { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Errors shared by the decision procedures.

use std::fmt;

use thiserror::Error;

use crate::spaces::SpaceError;

/// One violated well-formedness rule of a stable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairViolation {
    /// A pseudo-spectrum point that is not flagged idempotent.
    PiNotIdempotent(String),
    /// A pseudo-spectrum point that is not flagged branched.
    PiNotBranched(String),
    /// A pseudo-spectrum point that also lies in the quasi-spectrum.
    PiInsideDelta(String),
    /// A pseudo-spectrum point with a strictly smaller prime outside delta.
    LowerPrimeMissing { point: String, lower: String },
    /// The generic point (zero ideal) was placed in the pseudo-spectrum.
    GenericInPi,
}

impl PairViolation {
    /// Stable machine-readable rule name.
    pub fn rule(&self) -> &'static str {
        match self {
            PairViolation::PiNotIdempotent(_) => "pi-not-idempotent",
            PairViolation::PiNotBranched(_) => "pi-not-branched",
            PairViolation::PiInsideDelta(_) => "pi-inside-delta",
            PairViolation::LowerPrimeMissing { .. } => "lower-prime-missing",
            PairViolation::GenericInPi => "generic-in-pi",
        }
    }
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::PiNotIdempotent(p) => write!(f, "pi-not-idempotent: {p}"),
            PairViolation::PiNotBranched(p) => write!(f, "pi-not-branched: {p}"),
            PairViolation::PiInsideDelta(p) => write!(f, "pi-inside-delta: {p}"),
            PairViolation::LowerPrimeMissing { point, lower } => {
                write!(f, "lower-prime-missing: {lower} lies below {point} but not in delta")
            }
            PairViolation::GenericInPi => f.write_str("generic-in-pi"),
        }
    }
}

fn join_violations(v: &[PairViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SslabError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("operands live in different spaces")]
    SpaceMismatch,
    #[error("operands use different Prüfer descriptors")]
    DescriptorMismatch,
    #[error("empty family")]
    EmptyFamily,
    #[error("invalid ideal descriptor: {0}")]
    InvalidIdeal(String),
    #[error("invalid Prüfer descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),
    #[error("fixpoint iteration exceeded the cap of {cap} steps")]
    IterationCap { cap: usize },
    #[error("invalid stable pair: {}", join_violations(.0))]
    InvalidPair(Vec<PairViolation>),
    #[error("oracle is not the membership function of a stable operation: {0}")]
    OracleNotStable(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("poset has {points} points; exhaustive enumeration handles at most {limit}")]
    SizeGuard { points: usize, limit: usize },
    #[error("lattice bound is not unique")]
    NonUniqueBound,
    #[error("rebuilt pair differs from the input on ideal {ideal}")]
    RebuildMismatch { ideal: String },
    #[error("operation requires a min-scattered backend (finite poset or ordinal)")]
    NotMinScattered,
}

pub type Result<T, E = SslabError> = std::result::Result<T, E>;

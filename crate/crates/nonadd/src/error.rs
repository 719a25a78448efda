use thiserror::Error;

/// Crate-wide error type. Witness-carrying variants keep enough structure
/// for callers (and tests) to re-evaluate the offending objects.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("set is not a member of the space's algebra: {0}")]
    NotInAlgebra(String),
    #[error("operands belong to different ground spaces")]
    SpaceMismatch,
    #[error("operation undefined on the empty set")]
    EmptySet,
    #[error("invalid interval endpoints lo={lo} hi={hi}")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("invalid construction: {0}")]
    Invalid(String),
    #[error("unsupported for this representation: {0}")]
    Unsupported(String),
    #[error("series diverges: {0}")]
    SeriesDiverges(String),
    #[error("exponents are not conjugate: 1/{p} + 1/{q} != 1")]
    ConjugateMismatch { p: f64, q: f64 },
    #[error("supremum of the interval sequence is unbounded")]
    UnboundedSup,
    #[error("hypothesis violated: {name} ({detail})")]
    HypothesisViolated { name: String, detail: String },
    #[error("set is not an atom; witness subset {witness}")]
    NotAnAtom { witness: String },
    #[error("no unique single point carries the atom's mass: {0}")]
    NoSinglePoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;

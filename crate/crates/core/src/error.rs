use thiserror::Error;

/// Structured failures reported by the kernel.
///
/// Every validation error names the offending entity so the CLI can print it
/// without further context.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown sort `{0}`")]
    UnknownSort(String),
    #[error("unknown face map `{0}`")]
    UnknownFace(String),
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown generator or cell `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("dimension violation: {0}")]
    DimensionViolation(String),
    #[error("composition gap: {0}")]
    CompositionGap(String),
    #[error("associativity failure: {0}")]
    AssociativityFailure(String),
    #[error("functoriality failure: {0}")]
    FunctorialityFailure(String),
    #[error("missing action: {0}")]
    MissingAction(String),
    #[error("base categories differ")]
    BaseMismatch,
    #[error("arity of `{0}` has cells above the dimension of its output sort")]
    ArityDimensionViolation(String),
    #[error("boundary term ill-typed: {0}")]
    BoundaryIllTyped(String),
    #[error("cocycle failure: {0}")]
    CocycleFailure(String),
    #[error("gluing ill-typed: {0}")]
    GluingIllTyped(String),
    #[error("incompatible argument family: {0}")]
    IncompatibleArgs(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("morphism endpoints do not match")]
    EndpointMismatch,
    #[error("morphism is not variable-to-variable: {0}")]
    NotVarToVar(String),
    #[error("morphism is not a monomorphism: {0}")]
    NotMono(String),
    #[error("endomorphism is not idempotent")]
    NotIdempotent,
    #[error("boundary condition failure: {0}")]
    BoundaryConditionFailure(String),
    #[error("partial interpretation table: {0}")]
    PartialTable(String),
    #[error("depth bound {0} exceeded")]
    DepthExceeded(usize),
    #[error("incompatible lifting problem: {0}")]
    NotCompatible(String),
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("bad subset: {0}")]
    BadSubset(String),
    #[error("side condition failure: {0}")]
    SideConditionFailure(String),
    #[error("malformed document: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

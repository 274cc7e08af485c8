use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("dotted link error: {0}")]
    DottedLink(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("handle slide refused: diagram carries a planar code that the slide would invalidate")]
    PdPresent,
    #[error("diagram has no planar code, which this backend requires")]
    MissingPd,
    #[error("resource limit: {needed} crossings after cabling exceeds the cap of {cap}")]
    ResourceLimit { needed: usize, cap: usize },
    #[error("global dimension is not a positive real: {0}")]
    NonPositiveGlobalDimension(String),
    #[error("invalid target category: {0}")]
    InvalidTarget(String),
    #[error("target category is not modular")]
    NotModular,
    #[error("CP2 or CP2-bar value is not invertible")]
    NonInvertibleCp2,
    #[error("functor label map is not injective")]
    NotInjectiveLabelMap,
    #[error("zero dimension: {0}")]
    ZeroDimension(String),
    #[error("unknown manifold: {0}")]
    UnknownManifold(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Resource,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ResourceLimit { .. } => ErrorKind::Resource,
            _ => ErrorKind::Validation,
        }
    }

    /// Short machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Schema(_) => "SchemaError",
            Error::Consistency(_) => "ConsistencyError",
            Error::DottedLink(_) => "DottedLinkError",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::PdPresent => "PdPresentError",
            Error::MissingPd => "MissingPd",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::NonPositiveGlobalDimension(_) => "NonPositiveGlobalDimension",
            Error::InvalidTarget(_) => "InvalidTarget",
            Error::NotModular => "NotModular",
            Error::NonInvertibleCp2 => "NonInvertibleCp2",
            Error::NotInjectiveLabelMap => "NotInjectiveLabelMap",
            Error::ZeroDimension(_) => "ZeroDimension",
            Error::UnknownManifold(_) => "UnknownManifold",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidHom(_) => "InvalidHom",
            Error::InvalidCategory(_) => "InvalidCategory",
            Error::InvalidFunctor(_) => "InvalidFunctor",
            Error::Unsupported(_) => "Unsupported",
            Error::Json(_) => "SchemaError",
        }
    }
}

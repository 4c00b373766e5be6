use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HscError {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("induced map not well-defined: {0}")]
    NotWellDefined(String),

    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("invalid module data: {0}")]
    InvalidModule(String),

    #[error("{what} is not a subalgebra")]
    NotSubalgebra { what: String },

    #[error("{what} is not an ideal")]
    NotIdeal { what: String },

    #[error("no equivariant complement: {0}")]
    NoEquivariantComplement(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("psi is not an isomorphism at (p, q) = ({p}, {q})")]
    PsiNotIso { p: usize, q: usize },

    #[error("tensor decomposition hypothesis fails in degree q = {q}")]
    HypothesisFails { q: usize },

    #[error("pairing shape mismatch: {0}")]
    PairingShape(String),

    #[error("unsupported root system type: {0}")]
    UnsupportedType(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
}

pub type Result<T> = std::result::Result<T, HscError>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("WeightMismatch: u-weights {0} and {1} differ")]
    WeightMismatch(u32, u32),
    #[error("InvalidWeight: u-weight must be at least 2, got {0}")]
    InvalidWeight(u32),
    #[error("IllFormedSurface: {0}")]
    IllFormedSurface(String),
    #[error("NotHermitian: coefficients of ({0},{1},{2}) and ({1},{0},{2}) are not conjugate")]
    NotHermitian(u32, u32, u32),
    #[error("NonInvertibleLinearPart: {0}")]
    NonInvertibleLinearPart(String),
    #[error("NonGradedMap: {0}")]
    NonGradedMap(String),
    #[error("RealityViolation: solved series is not hermitian at ({0},{1},{2})")]
    RealityViolation(u32, u32, u32),
    #[error("TruncationTooLow: order {requested} requested but data is trusted only to {available}")]
    TruncationTooLow { requested: u32, available: u32 },
    #[error("LeviDegenerate: Levi form vanishes, use the finite-type normalization")]
    LeviDegenerate,
    #[error("WrongCase: expected a {expected} model, found {found}")]
    WrongCase { expected: String, found: String },
    #[error("TubularUnsupported: see [Ko1]")]
    TubularUnsupported,
    #[error("InfiniteTypeWithinTruncation: no finite type up to order {0}")]
    InfiniteType(u32),
    #[error("SingularSystem: weighted degree {degree} is inconsistent (rank defect {defect})")]
    SingularSystem { degree: u32, defect: usize },
    #[error("CaseMismatch: {0}")]
    CaseMismatch(String),
    #[error("DegreeMismatch: coefficient lists of lengths {0} and {1}")]
    DegreeMismatch(usize, usize),
    #[error("InvalidModel: {0}")]
    InvalidModel(String),
    #[error("UnsupportedCase: {0}")]
    UnsupportedCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;

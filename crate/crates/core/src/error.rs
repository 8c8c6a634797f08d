use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry (NaN or infinity)")]
    NonFinite,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not positive definite (smallest eigenvalue {smallest:e})")]
    NotPositiveDefinite { smallest: f64 },

    #[error("family is not a frame: lower bound {lower_bound:e}")]
    NotAFrame { lower_bound: f64 },

    #[error("member count mismatch: primal has {primal}, dual has {dual}")]
    MemberCountMismatch { primal: usize, dual: usize },

    #[error("not a dual: reconstruction residual {residual:e}")]
    NotDual { residual: f64 },

    #[error("perturbation violates the dual relation: residual {residual:e}")]
    InvalidPerturbation { residual: f64 },

    #[error("basis is not orthonormal: deviation {deviation:e}")]
    NonOrthonormalBasis { deviation: f64 },

    #[error("left-inverse property violated: residual {residual:e}")]
    NotLeftInverse { residual: f64 },

    #[error("erasure index {index} out of range for {total} elements")]
    IndexOutOfRange { index: usize, total: usize },

    #[error("erasure count r = {r} must satisfy 1 <= r < {m}")]
    ErasureCountOutOfRange { r: usize, m: usize },

    #[error("enumeration of {count} subsets exceeds the cap of {cap}")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("construction infeasible: {0}")]
    Infeasible(String),

    #[error("matrix is not unitary: deviation {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("invariance precondition failed at members {indices:?}")]
    InvarianceFailure { indices: Vec<usize> },
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("negative eigenvalue {value:e} exceeds tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("not a density matrix: {0}")]
    InvalidState(String),

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid representation `{label}`: {reason}")]
    InvalidRepresentation { label: String, reason: String },

    #[error("representations live on different groups")]
    GroupMismatch,

    #[error("unknown irrep label `{0}`")]
    UnknownLabel(String),

    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),

    #[error("multiplicity of `{label}` is {value:.9}, not an integer")]
    NonIntegerMultiplicity { label: String, value: f64 },

    #[error("representation is not irreducible (<chi,chi> = {norm:.6})")]
    NotIrreducible { norm: f64 },

    #[error("matrix unit for `{label}` has rank {found}, expected multiplicity {expected}")]
    RankMismatch {
        label: String,
        expected: usize,
        found: usize,
    },

    #[error("adapted basis lost orthogonality (residual {residual:e})")]
    LostOrthogonality { residual: f64 },

    #[error("Kraus operators are not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("commutant is non-abelian: block `{label}` has multiplicity {multiplicity}; no measure-and-prepare processor exists")]
    NonAbelianCommutant { label: String, multiplicity: usize },

    #[error("target channel lies outside the convex hull of the extreme points (residual {residual:e})")]
    OutsideConvexHull { residual: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("lower-bound chain violated at `{stage}` (slack {slack:e})")]
    ChainViolation { stage: String, slack: f64 },

    #[error("not a valid channel: {0}")]
    InvalidChannel(String),

    #[error("malformed JSON document: {0}")]
    Spec(#[from] serde_json::Error),
}

pub(crate) fn dim_mismatch(
    context: &'static str,
    expected: impl ToString,
    found: impl ToString,
) -> Error {
    Error::DimensionMismatch {
        context,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

use thiserror::Error;

/// Diagnostics for malformed `.cox` input. Row and column are generator
/// indices (0-based), `line` is the 1-based line in the file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: entry at row {row}, column {col} is not a non-negative integer: {token:?}")]
    BadEntry {
        line: usize,
        row: usize,
        col: usize,
        token: String,
    },
    #[error("matrix not symmetric: entry ({row}, {col}) is {value} but ({col}, {row}) is {mirror}")]
    Asymmetric {
        row: usize,
        col: usize,
        value: u64,
        mirror: u64,
    },
    #[error("diagonal entry ({row}, {row}) must be 1, found {value}")]
    Diagonal { row: usize, value: u64 },
    #[error("off-diagonal entry ({row}, {col}) is {value}; orders must be >= 2 (0 encodes infinity)")]
    OffDiagonalTooSmall { row: usize, col: usize, value: u64 },
    #[error("labels: {0}")]
    Labels(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("subset indices must be strictly increasing")]
    UnsortedSubset,
    #[error("rank {rank} exceeds the enumeration cap {cap}")]
    EnumerationCap { rank: usize, cap: usize },
    #[error("subset {0} is not spherical")]
    NotSpherical(String),
    #[error("subset {0} is not a maximal spherical subset")]
    NotMaximal(String),
    #[error("group order does not fit in 128 bits")]
    OrderOverflow,
    #[error("cos(pi/m) is undefined for m = 1")]
    CosineOfOrderOne,
    #[error("cos(pi/{m}) does not lie in the cyclotomic field of order {field_order}")]
    NotInField { m: u32, field_order: u64 },
    #[error("matrix is not symmetric")]
    NonSymmetric,
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("word of length {length} exceeds the oracle cap {cap}")]
    OracleCap { length: usize, cap: usize },
    #[error("parabolic subgroup has more than {cap} elements")]
    CayleyOverflow { cap: usize },
    #[error("unknown generator label {0:?}")]
    UnknownLabel(String),
    #[error("the word represents the identity; there is nothing to separate")]
    IdentityWord,
    #[error("image group exceeds the enumeration cap of {cap} elements")]
    ImageTooLarge { cap: usize },
    #[error("quotient does not satisfy the Coxeter relations")]
    InvalidQuotient,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("prerequisite check {0} has not passed")]
    Prerequisite(&'static str),
    #[error("internal consistency fault: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

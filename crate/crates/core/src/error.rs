use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate value at positions {first} and {second}; reduction is undefined")]
    DuplicateValue { first: usize, second: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} exceeded the configured limit of {limit}")]
    ResourceLimit { what: &'static str, limit: u64 },

    #[error("point {0} lies outside [0,1]")]
    OutOfDomain(String),

    #[error("unknown map `{0}`")]
    UnknownMap(String),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("orbit values {first} and {second} are within the tie tolerance; pattern undefined")]
    TieDetected { first: usize, second: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceLimit { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

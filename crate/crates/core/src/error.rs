use thiserror::Error;

/// Errors raised by the group-theoretic core and the search driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("generator x{gen} used but only {n} generators declared")]
    UnknownGenerator { gen: usize, n: usize },
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("presentation is inconsistent")]
    Inconsistent,
    #[error("cokernel is infinite (rank {rank} < {cols} columns)")]
    InfiniteCokernel { rank: usize, cols: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("images do not define a homomorphism: relation {0} not preserved")]
    NotHomomorphism(String),
    #[error("presentation lacks a definition for generator x{0}")]
    MissingDefinition(usize),
    #[error("group is not elementary abelian")]
    NotElementaryAbelian,
    #[error("isomorphism test limited to order p^{limit}, got p^{n}")]
    SizeLimit { limit: usize, n: usize },
    #[error("{count} allowable subgroups exceed the enumeration limit {limit}")]
    TooManySubspaces { count: u64, limit: u64 },
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no surjection from the root onto the reference quotient {0}")]
    NoSurjection(String),
    #[error("not found among the immediate descendants: {0}")]
    NotLocated(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("the trivial word is not allowed here")]
    TrivialWord,

    #[error("the zero current is not allowed here")]
    ZeroCurrent,

    #[error("negative scalar: currents form a cone")]
    NegativeScalar,

    #[error("declared inverse does not invert the automorphism")]
    NotInverse,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(usize, usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search too large: {count} conjugacy classes exceed the limit of {limit}")]
    TooManyClasses { count: u128, limit: u128 },

    #[error("word-length budget of {budget} letters exceeded (reached {reached})")]
    BudgetExceeded { budget: usize, reached: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

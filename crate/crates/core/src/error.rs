use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{name}` has degree {degree}, expected a positive {expected} integer")]
    BadDegree {
        name: String,
        degree: u32,
        expected: &'static str,
    },
    #[error("monomial shape ({even} even, {odd} odd) does not match variable table ({table_even} even, {table_odd} odd)")]
    DimensionMismatch {
        even: usize,
        odd: usize,
        table_even: usize,
        table_odd: usize,
    },
    #[error("the unit monomial cannot be an ideal generator")]
    UnitGenerator,
    #[error("ideal is not square-free")]
    NotSquareFree,
    #[error("too many odd variables ({0}); at most 64 are supported")]
    TooManyOddVariables(usize),
    #[error("composed differentials are nonzero: {0}")]
    NonzeroComposition(String),
    #[error("element lies outside the truncation bounds: {0}")]
    OutOfTruncation(String),
    #[error("action of `{w}` is not homogeneous: variable `{var}` has degree {var_degree}, expected {w_degree}")]
    InhomogeneousAction {
        w: String,
        var: String,
        var_degree: u32,
        w_degree: u32,
    },
    #[error("actions do not commute: {0}")]
    NonCommuting(String),
    #[error(transparent)]
    Parse(#[from] crate::parse::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

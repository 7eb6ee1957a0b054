use thiserror::Error;

/// Errors raised by arithmetic, parsing, and lifting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element with zero standard part is not invertible")]
    NotInvertible,

    #[error("malformed alpha family: {0}")]
    MalformedAlpha(String),

    #[error("elements belong to different Weil algebras")]
    AlgebraMismatch,

    #[error("monomial {0} is not a surviving monomial of the algebra")]
    NotInAlgebra(String),

    #[error("invalid exponent {num}/{den}: exponents must lie in (0, 1]")]
    InvalidExponent { num: i64, den: i64 },

    #[error("syntax error at position {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("ratio undefined: {0}")]
    RatioUndefined(String),

    #[error("increment is not a first-order infinitesimal")]
    NotFirstOrder,

    #[error("invalid stencil configuration: {0}")]
    InvalidStencil(String),

    #[error("invalid JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}

use thiserror::Error;

use crate::open::Generator;
use crate::parser::ParseError;
use crate::theory::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("theory does not validate:\n{0}")]
    Invalid(ValidationReport),

    #[error("index bound must be at least 1")]
    EmptyIndexSet,

    #[error("generator {generator} does not belong to the {presentation} presentation")]
    ForeignGenerator {
        generator: Generator,
        presentation: String,
    },

    #[error("generator map has no image for {0}")]
    MissingImage(Generator),

    #[error("variable {0} has no value in the substitution")]
    UnboundVariable(String),

    #[error("generator {0} is not a generator of the arrow locale")]
    NotArrowGenerator(Generator),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("index {index} is out of range for k = {k}")]
    IndexOutOfRange { index: usize, k: usize },

    #[error("malformed open expression at byte {offset}: {message}")]
    Expression { offset: usize, message: String },

    #[error("enumeration refused: about {estimate:.3e} candidate structures exceed the limit of {limit}")]
    SizeGuard { estimate: f64, limit: u64 },

    #[error("models were enumerated at k = {expected}, open is over k = {found}")]
    IndexMismatch { expected: usize, found: usize },

    #[error("isomorphisms are not composable: target of the first is model {0}, source of the second is model {1}")]
    NotComposable(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

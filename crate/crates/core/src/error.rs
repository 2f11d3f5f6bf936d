use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("relation set does not generate the ideal: {0}")]
    NotGenerating(String),

    #[error("relation set is not minimal: {0}")]
    NotMinimal(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("not a monomorphism: {0}")]
    NotMonomorphism(String),

    #[error("not a cocycle: {0}")]
    NotCocycle(String),

    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),

    #[error("enumeration of {requested} points exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u128 },

    #[error("{0}")]
    Unsupported(String),
}

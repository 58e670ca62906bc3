use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: undeclared generator `{name}`")]
    UndeclaredGenerator { name: String, line: usize },
    #[error("line {line}: generator `{name}` declared twice")]
    DuplicateGenerator { name: String, line: usize },
    #[error("line {line}: differential of `{name}` assigned twice")]
    DuplicateDifferential { name: String, line: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("the algebra has no generators")]
    NoGenerators,
    #[error("first generator `{0}` is not a cocycle")]
    FirstGeneratorNotCocycle(String),
    #[error("first generator `{0}` has odd degree; multiplication by it is not injective")]
    FirstGeneratorOdd(String),
    #[error("differential is not homogeneous in word length")]
    NotHomogeneous,

    #[error("degree {degree} slice has more than {cap} monomials")]
    SliceTooLarge { degree: u32, cap: usize },
    #[error("degree {degree} is outside the computed range 0..={bound}")]
    DegreeOutOfBound { degree: u32, bound: u32 },
    #[error("polynomial is not a cocycle")]
    NotACocycle,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneousElement(String),
    #[error("class is zero")]
    ZeroClass,
    #[error("model is not certified elliptic")]
    NotCertified,

    #[error("lift of a quotient cocycle has a coboundary term without the first generator: {0}")]
    LiftNotDivisible(String),
    #[error(
        "Toomer invariant mismatch: formula gives {formula}, quotient computation gives {direct}"
    )]
    ToomerMismatch { formula: u32, direct: u32 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("sweep bounds exceed the guard: {0}")]
    GuardExceeded(String),
}

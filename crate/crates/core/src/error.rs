use thiserror::Error;

/// Errors raised by the engine. Each variant belongs to one module and
/// carries a stable module-qualified code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("root-of-unity order must be positive")]
    InvalidOrder,
    #[error("cannot parse scalar `{0}`")]
    ScalarParse(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid grade {grade:?} for (Z_{modulus})^{rank}")]
    InvalidGrade {
        grade: Vec<i64>,
        modulus: u32,
        rank: usize,
    },
    #[error("classification is only defined for n = 2, k = 2 (got n = {modulus}, k = {rank})")]
    UnsupportedClassification { modulus: u32, rank: usize },
    #[error("epsilon must be +1 or -1 (got {0})")]
    InvalidEpsilon(i64),

    #[error("elements belong to different algebra specs")]
    SpecMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator id `{0}`")]
    DuplicateGenerator(String),
    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("braiding component for grades {0} is not defined")]
    MissingComponent(String),
    #[error("braiding component for grades {0} is not invertible")]
    NotInvertible(String),
    #[error("word too short for braiding at position {position}: length {length}")]
    WordTooShort { position: usize, length: usize },
    #[error("invalid braiding: {0}")]
    InvalidBraiding(String),

    #[error("argument outside the generator span: {0}")]
    OutsideSpan(String),
    #[error("bracket output is not closed in the generator span for triple {0}")]
    NotClosed(String),

    #[error("quadratic form violates the graded symmetry rule at ({0}, {1})")]
    QFormViolation(String, String),
    #[error("unsupported species for the Green oracle: {0}")]
    UnsupportedSpecies(String),
    #[error("Fock cutoff {cutoff} too small (need at least {required})")]
    CutoffTooSmall { cutoff: usize, required: usize },
    #[error("Green sign self-validation failed: {0}")]
    GreenSignSelection(String),

    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("spec violations: {}", .0.join("; "))]
    Schema(Vec<String>),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidOrder => "exactscalar.invalid_order",
            Error::ScalarParse(_) => "exactscalar.parse",
            Error::DivisionByZero => "exactscalar.division_by_zero",
            Error::Shape(_) => "grading.shape",
            Error::InvalidGrade { .. } => "grading.invalid_grade",
            Error::UnsupportedClassification { .. } => "grading.unsupported_classification",
            Error::InvalidEpsilon(_) => "grading.invalid_epsilon",
            Error::SpecMismatch => "freealg.spec_mismatch",
            Error::UnknownGenerator(_) => "freealg.unknown_generator",
            Error::DuplicateGenerator(_) => "freealg.duplicate_generator",
            Error::Inhomogeneous(_) => "freealg.inhomogeneous",
            Error::MissingComponent(_) => "braiding.missing_component",
            Error::NotInvertible(_) => "braiding.not_invertible",
            Error::WordTooShort { .. } => "braiding.word_too_short",
            Error::InvalidBraiding(_) => "braiding.invalid",
            Error::OutsideSpan(_) => "parastat.outside_span",
            Error::NotClosed(_) => "ternary.not_closed",
            Error::QFormViolation(..) => "parastat.qform_violation",
            Error::UnsupportedSpecies(_) => "parastat.unsupported_species",
            Error::CutoffTooSmall { .. } => "parastat.cutoff",
            Error::GreenSignSelection(_) => "parastat.green_sign",
            Error::Json(_) => "cli.json",
            Error::Schema(_) => "cli.schema",
            Error::Usage(_) => "cli.usage",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

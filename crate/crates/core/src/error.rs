use alloc::string::String;

/// Errors raised by the core crate.
///
/// Every variant has a stable machine-readable [`code`](Error::code) so that
/// front ends can report failures without parsing the message.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid weight system: {0}")]
    InvalidWeights(String),
    #[error("invalid weighted point: {0}")]
    InvalidPoint(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("height bound must be positive")]
    NonPositiveHeight,
    #[error("singular sextic (zero discriminant)")]
    SingularSextic,
    #[error("not a genus-2 moduli point: J10 = 0")]
    ZeroDiscriminant,
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("degenerate L5 parameters: {0}")]
    DegenerateL5(String),
    #[error("slice not rationally parametrized: {0}")]
    SliceNotParametrized(String),
    #[error("division by zero while evaluating {0}")]
    DivisionByZero(String),
    #[error("enumeration box of {candidates} candidates exceeds budget of {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },
    #[error("retry budget exhausted after {0} attempts")]
    RetriesExhausted(usize),
    #[error("label conflict for key {key}: field {field}")]
    LabelConflict { key: String, field: String },
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("zero row at index {0}")]
    ZeroRow(usize),
    #[error("class {class} has fewer than 2 members")]
    ClassTooSmall { class: usize },
}

impl Error {
    /// Stable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidWeights(_) => "invalid_weights",
            Error::InvalidPoint(_) => "invalid_point",
            Error::ZeroScalar => "zero_scalar",
            Error::NonPositiveHeight => "nonpositive_height",
            Error::SingularSextic => "singular_sextic",
            Error::ZeroDiscriminant => "zero_discriminant",
            Error::DegenerateParameters(_) => "degenerate_parameters",
            Error::DegenerateL5(_) => "degenerate_l5_parameters",
            Error::SliceNotParametrized(_) => "slice_not_parametrized",
            Error::DivisionByZero(_) => "division_by_zero",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::RetriesExhausted(_) => "retries_exhausted",
            Error::LabelConflict { .. } => "label_conflict",
            Error::SchemaMismatch(_) => "schema_mismatch",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::EmptyTrainingSet => "empty_training_set",
            Error::ZeroRow(_) => "zero_row",
            Error::ClassTooSmall { .. } => "class_too_small",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

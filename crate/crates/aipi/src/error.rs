use thiserror::Error;

/// Engine errors. Every variant carries a stable machine-readable code,
/// available through [`Error::code`], which is what external tooling and
/// the CLI report alongside the human-readable message.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: syntax error: {message}")]
    Syntax { path: String, message: String },

    #[error("{path}: duplicate key `{key}`")]
    DuplicateKey { path: String, key: String },

    #[error("{path}: `{reference}` does not resolve (referenced from {context})")]
    DanglingRef {
        path: String,
        reference: String,
        context: String,
    },

    #[error("value {value} outside the domain of {indicator} ({kind})")]
    ValueDomain {
        indicator: String,
        kind: String,
        value: String,
    },

    #[error("code for {context} has a non-unknown value but no evidence refs")]
    MissingEvidence { context: String },

    #[error("value variant does not match indicator kind for {context}")]
    KindMismatch { context: String },

    #[error("dataset failed validation with {n_errors} error(s)")]
    ValidationFailed { n_errors: usize },

    #[error("pillar {pillar} has no indicators")]
    EmptyPillar { pillar: String },

    #[error("missing pillar {pillar} in subject score input")]
    MissingPillar { pillar: String },

    #[error("system {system} does not belong to provider {provider}")]
    WrongProvider { system: String, provider: String },

    #[error("required indicator `{indicator}` is not part of this release")]
    UnknownRequiredId { indicator: String },

    #[error("subject sets differ between rank vectors")]
    SubjectMismatch,

    #[error("dataset is empty")]
    Empty,

    #[error("no item has two or more codes")]
    NoPairs,

    #[error("count indicator `{indicator}` missing from the frozen reference table")]
    MissingCref { indicator: String },

    #[error("release at {path} does not match its manifest: {detail}")]
    Tampered { path: String, detail: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{message}")]
    Config { message: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "E_SYNTAX",
            Error::DuplicateKey { .. } => "E_DUP_KEY",
            Error::DanglingRef { .. } => "E_DANGLING_REF",
            Error::ValueDomain { .. } => "E_VALUE_DOMAIN",
            Error::MissingEvidence { .. } => "E_MISSING_EVIDENCE",
            Error::KindMismatch { .. } => "E_KIND_MISMATCH",
            Error::ValidationFailed { .. } => "E_VALIDATION",
            Error::EmptyPillar { .. } => "E_EMPTY_PILLAR",
            Error::MissingPillar { .. } => "E_MISSING_PILLAR",
            Error::WrongProvider { .. } => "E_WRONG_PROVIDER",
            Error::UnknownRequiredId { .. } => "E_UNKNOWN_REQUIRED_ID",
            Error::SubjectMismatch => "E_SUBJECT_MISMATCH",
            Error::Empty => "E_EMPTY",
            Error::NoPairs => "E_NO_PAIRS",
            Error::MissingCref { .. } => "E_MISSING_CREF",
            Error::Tampered { .. } => "E_TAMPERED",
            Error::Io(_) => "E_IO",
            Error::Json(_) => "E_SYNTAX",
            Error::Config { .. } => "E_CONFIG",
        }
    }
}

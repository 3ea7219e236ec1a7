use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorIndex(usize),
    #[error("elements belong to different generator tables")]
    MixedTables,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cohomology spec `{name}` is invalid:\n{report}")]
    SpecInvalid { name: String, report: String },
    #[error("model construction failed: {0}")]
    ModelConstruction(String),
    #[error("block (degree {degree}, weight {weight}) is outside the assembled truncation; re-run with a weight bound of at most {weight}")]
    TruncationRequired { degree: i64, weight: i64 },
    #[error("gauge parameter has weight {0} >= 0, so nilpotence is not guaranteed; supply an explicit bound")]
    NilpotenceNotGuaranteed(i64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("family `{0}` is not supported by this operation")]
    NotImplemented(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

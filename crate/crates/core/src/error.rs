use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty phone")]
    EmptyPhone,

    #[error("unknown field `{0}`")]
    UnknownField(String),

    #[error("no menu for field `{0}`")]
    NoMenu(String),

    #[error("menu index {index} out of range for field `{field}` ({len} entries)")]
    MenuIndex {
        field: String,
        index: usize,
        len: usize,
    },

    #[error("empty value for field `{0}`")]
    EmptyValue(String),

    #[error("empty dictionary word")]
    EmptyWord,

    #[error("duplicate record id `{0}`")]
    DuplicateRecordId(String),

    #[error("record does not conform to schema: {0}")]
    NonConforming(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no data for `{0}`")]
    NoData(String),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    #[error("invalid rule set: {0}")]
    InvalidRules(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("missing medians: {}", .0.join(", "))]
    MissingMedians(Vec<String>),

    #[error("unknown draft `{0}`")]
    UnknownDraft(String),

    #[error("draft `{0}` is already finalized")]
    DraftFinalized(String),

    #[error("unknown condition `{0}`")]
    UnknownCondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path-loss model: {0}")]
    InvalidModel(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("at least 3 anchors are required, got {0}")]
    InsufficientAnchors(usize),

    #[error("argument error: {0}")]
    Argument(String),

    /// The normal matrix is singular: anchors are (numerically) collinear.
    #[error("singular anchor geometry (anchors {})", anchor_ids.join(", "))]
    SingularGeometry { anchor_ids: Vec<String> },

    #[error("placement {index}: {source}")]
    Placement {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

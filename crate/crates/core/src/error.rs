use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot resample {from} Hz to {to} Hz: common grid exceeds {bound} Hz")]
    NonCommensurateRates { from: f64, to: f64, bound: u64 },

    #[error("window of {needed} samples is longer than the series ({available} samples)")]
    WindowTooLong { needed: usize, available: usize },

    #[error("embedding dimension {dim} exceeds subwindow length {len}")]
    DimensionTooLarge { dim: usize, len: usize },

    #[error("need at least {needed} subwindows per window, got {available}")]
    InsufficientSubwindows { needed: usize, available: usize },

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("series is empty")]
    EmptySeries,

    #[error("expected {expected} diagrams, got {got}")]
    WrongDiagramCount { expected: usize, got: usize },

    #[error("every feature column was dropped during pruning")]
    AllColumnsDropped,

    #[error("pooled covariance is singular")]
    SingularCovariance,

    #[error("cross-validation needs at least two subjects")]
    SingleSubject,

    #[error("subject {subject}, condition {condition}: not enough windows on one side of the split")]
    ConditionTooShort { subject: String, condition: String },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) trait ResultExt<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T, E: Into<Error>> ResultExt<T> for std::result::Result<T, E> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| e.into().context(context()))
    }
}

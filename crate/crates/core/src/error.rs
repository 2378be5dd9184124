use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid card distribution: {0}")]
    InvalidDistribution(String),

    #[error("deck of {cards} cards realizes an invalid distribution: {reason}")]
    RealizedDistributionInvalid { cards: u64, reason: String },

    #[error("deck exhausted: more respondents than cards")]
    DeckExhausted,

    #[error("privacy budget is unbounded: card value {value} can be reported but its mirror has probability zero")]
    UnboundedBudget { value: usize },

    #[error("invalid auxiliary design parameter: {0}")]
    InvalidAux(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(
        "instance too large for exact enumeration: {outcomes} outcomes (N = {n}, cap = {cap})"
    )]
    InstanceTooLarge {
        n: usize,
        cap: usize,
        outcomes: u128,
    },

    #[error("column `{0}` not found in dataset header")]
    MissingColumn(String),

    #[error("unknown code `{value}` at data row {row}")]
    UnknownCode { row: usize, value: String },

    #[error("dataset has no data rows")]
    EmptyDataset,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use crate::game::ActionId;
use thiserror::Error;

/// Errors raised by the game, learning and evaluation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is terminal; {0} is undefined")]
    TerminalState(&'static str),
    #[error("state is not terminal; returns are undefined")]
    NotTerminal,
    #[error("state is not a chance node")]
    NotChance,
    #[error("state is a chance node; {0} is undefined")]
    ChanceState(&'static str),
    #[error("illegal action {action} at state {state}")]
    IllegalAction { state: String, action: ActionId },
    #[error("invalid player index {0}")]
    InvalidPlayer(usize),
    #[error("unknown game `{name}` (supported: {supported})")]
    UnknownGame { name: String, supported: String },
    #[error("key `{key}` does not belong to game {game}")]
    ForeignKey { key: String, game: &'static str },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not ready: {0}")]
    NotReady(String),
    #[error("key-space mismatch: key `{0}` present in only one policy")]
    KeySpaceMismatch(String),
    #[error("checkpoint parse error: {0}")]
    Checkpoint(String),
    #[error("empty legal action set")]
    NoLegalActions,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

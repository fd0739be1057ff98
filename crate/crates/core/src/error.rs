use thiserror::Error;

/// Errors surfaced by the compilation and solving pipelines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unknown letter {letter} for alphabet of {atoms} atoms")]
    UnknownLetter { letter: u32, atoms: usize },
    #[error("initial state has incoming transitions; run normalize_initial first")]
    InitialNotFresh,
    #[error("component count {components} does not match skeleton arity {arity}")]
    IndexMisalignment { components: usize, arity: usize },
    #[error("invalid atom partition: {0}")]
    BadPartition(String),
    #[error("empty cycle: a lasso needs a non-empty periodic part")]
    EmptyCycle,
    #[error("empty trace")]
    EmptyTrace,
    #[error("malformed transition system: {0}")]
    MalformedTransitionSystem(String),
    #[error("strategy extraction on an unrealizable instance")]
    Unrealizable,
    #[error("malformed game: {0}")]
    MalformedGame(String),
}

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("not grammatical: {sequence} does not reduce to {target}")]
    NotGrammatical { sequence: String, target: String },
    #[error("base type `{0}` is not in the alphabet")]
    AlphabetMismatch(String),
    #[error("invalid reduction diagram: {0}")]
    InvalidDiagram(String),
    #[error("type syntax: {0}")]
    TypeSyntax(String),

    #[error("shape error: {0}")]
    Shape(String),
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },
    #[error("axis {axis} out of range for rank {rank}")]
    AxisOutOfRange { axis: usize, rank: usize },
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("axis ({0}, {1}) used more than once")]
    DuplicateAxis(usize, usize),
    #[error("free axis ({0}, {1}) missing from the output order")]
    MissingOutputAxis(usize, usize),
    #[error("non-finite tensor entry")]
    NonFinite,
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("expected rank {expected}, got {found}")]
    Rank { expected: usize, found: usize },

    #[error("role vectors are linearly dependent")]
    SingularRoles,
    #[error("slot {slot} out of range for {slots} slots")]
    SlotOutOfRange { slot: usize, slots: usize },

    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("duplicate lexicon entry `{0}`")]
    DuplicateWord(String),
    #[error("no space assigned to base type `{0}`")]
    UnknownBaseType(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use crate::lattice::Position;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("ring size must be at least 2, got {0}")]
    RingTooSmall(usize),

    #[error("position {position} is outside ring of size {size}")]
    PositionOutOfRange { position: Position, size: usize },

    #[error("component value {value} at position {position} must be below the alphabet bound N={bound}")]
    ComponentOutOfRange {
        position: Position,
        value: u8,
        bound: usize,
    },

    #[error("alphabet size must be between 1 and 255, got {0}")]
    InvalidAlphabet(usize),

    #[error("{0:?} is not a permutation of 0..{1}")]
    NotAPermutation(Vec<u8>, usize),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("topology mismatch: {0}")]
    TopologyMismatch(String),

    #[error("group axiom violated: {0}")]
    GroupAxiom(String),

    #[error("field value {value} on link {link} leaves the truncation |l| <= {l_max}")]
    TruncationOverflow { link: Position, value: i64, l_max: u32 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rule variants {first} and {second} are not gauge-equivalent")]
    NotEquivalent { first: usize, second: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

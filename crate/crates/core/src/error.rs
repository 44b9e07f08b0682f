use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text. Positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("generator index {index} out of range for rank {rank}")]
    GeneratorOutOfRange { index: usize, rank: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("determinant {0} is not +1 or -1")]
    NotUnimodular(String),

    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("not triangular for the given basis order: generator {0} is the first offender")]
    NotTriangular(String),

    #[error("invalid filtered graph map: {0}")]
    InvalidMap(String),

    #[error("stratum violation: suffix of edge {edge} uses edge {used} from a stratum >= its own")]
    StratumViolation { edge: String, used: String },

    #[error("character: {0}")]
    Character(String),

    #[error("character does not vanish on relator {index} ({relator}); value {value}")]
    RelatorNotKilled {
        index: usize,
        relator: String,
        value: String,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid graph of groups: {0}")]
    InvalidGraphOfGroups(String),

    #[error("ascending HNN extension: the edge-group criterion is inapplicable")]
    AscendingHnn,

    #[error("non-trivial modular map, center trivial: loop {loop_desc} has modulus {modulus}")]
    NontrivialModular { loop_desc: String, modulus: String },

    #[error("elementary GBS group ({0})")]
    ElementaryGbs(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("character is not in the BNS invariant: {0}")]
    NotInSigma(String),

    #[error(
        "no unipotent power: the abelianization has an eigenvalue that is not a root of unity"
    )]
    NotPolynomiallyGrowing,

    #[error("no triangular basis found for the power {power} of the automorphism")]
    NoTriangularPower { power: u64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}

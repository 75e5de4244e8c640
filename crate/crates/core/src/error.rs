use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground size {0} outside [1, 30]")]
    GroundSize(u32),
    #[error("element {element} outside [1, {n}]")]
    ElementOutOfRange { element: u32, n: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("families live over different ground sets ({0} vs {1})")]
    GroundMismatch(u32, u32),
    #[error("{0} is not a subset of the universe {1}")]
    NotInUniverse(String, String),
    #[error("invalid pair ({i}, {j}): {reason}")]
    InvalidPair { i: u32, j: u32, reason: &'static str },
    #[error("probability {0} outside the open interval (0, 1)")]
    Probability(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("weight table: {0}")]
    Weights(String),
    #[error("set {set} meets block {block} more than once")]
    BlockCollision { set: String, block: u32 },
    #[error("empty family where a non-empty one is required")]
    EmptyFamily,
    #[error("families are not cross {t}-intersecting: {f} and {g} share fewer than {t} elements")]
    NotCrossIntersecting { t: u32, f: String, g: String },
    #[error("terminal: a equals t ({0})")]
    TerminalAEqualsT(u32),
    #[error("no necessary intersection point")]
    NoNip,
    #[error("every member of F is a witness (F = F^a, a = {0})")]
    FEqualsWitnesses(u32),
    #[error("every member of G is a witness (G = G^a, a = {0})")]
    GEqualsWitnesses(u32),
    #[error("step cap exceeded after {0} steps")]
    StepCap(usize),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

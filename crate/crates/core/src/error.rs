use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NaN is not an extended real")]
    NaN,
    #[error("a proper function never takes the value -inf")]
    NegInfFunctionValue,
    #[error("+inf + -inf is undefined")]
    InfMinusInf,
    #[error("indeterminate 0·∞")]
    ZeroTimesInf,
    #[error("coefficient must be finite")]
    NonFiniteCoefficient,
    #[error("empty sample set")]
    EmptySampleSet,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("variable x{index} at position {pos} exceeds dimension {dim}")]
    VariableOutOfRange { index: usize, dim: usize, pos: usize },
    #[error("unknown corpus entry `{name}`; available: {available}")]
    UnknownCorpusEntry { name: String, available: String },
    #[error("corpus entry `{0}` registered twice")]
    DuplicateCorpusEntry(String),
    #[error("corpus entry `{0}` has no point with a finite value")]
    EmptyDomain(String),

    #[error("order {order} exceeds the supported cap {cap}")]
    OrderBeyondCap { order: usize, cap: usize },
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("order mismatch: expected {expected}, got {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: usize, got: usize },

    #[error("base point outside domain")]
    BaseOutsideDomain,
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("Dini order-{0} undefined: a lower-order derivative is infinite")]
    DiniUndefined(usize),
    #[error("Ginchev order-{0} undefined: a lower-order derivative is infinite")]
    GinchevUndefined(usize),

    #[error("lower-order subdifferential does not contain zero (order {0})")]
    LowerOrderSubdiff(usize),
    #[error("operation requires a one-dimensional function")]
    NotOneDimensional,
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty grid")]
    EmptyGrid,
    #[error("degenerate box: {0}")]
    DegenerateBox(String),
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
}

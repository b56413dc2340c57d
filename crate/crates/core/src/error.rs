use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),

    #[error("index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec<usize>, dims: Vec<usize> },

    #[error("block of side {side} at corner {corner:?} exceeds dims {dims:?}")]
    BlockOutOfBounds {
        corner: Vec<usize>,
        side: usize,
        dims: Vec<usize>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("input hypermatrix is all zero")]
    ZeroInput,

    #[error("{what} needs {needed} steps, cap is {cap}")]
    CapExceeded { what: &'static str, needed: f64, cap: f64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("index tuple {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),

    #[error("both centred blocks are {s}-periodic (violated witness guarantee): {dump}")]
    BothPeriodic { s: usize, dump: String },

    #[error("no direction of norm <= {radius} satisfies the single-contact property for support {support:?}")]
    NoAdmissibleDirection { radius: usize, support: Vec<Vec<usize>> },

    #[error("coordinate {axis} of the bound point lies outside the arc (theta = {theta}, limit = {limit})")]
    OutsideArc { axis: usize, theta: f64, limit: f64 },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("zero gap between hypotheses at oracle precision")]
    ZeroGap,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

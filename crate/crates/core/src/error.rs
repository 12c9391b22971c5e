use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("function is not finite at contour node {index} ({re}, {im})")]
    NodeEvaluation { index: usize, re: f64, im: f64 },

    #[error("no clean radius: best margin {best_margin:e} is below {threshold:e}")]
    NoCleanRadius { best_margin: f64, threshold: f64 },

    #[error("Laurent truncation residual {residual:e} exceeds tolerance {tolerance:e}")]
    Truncation { residual: f64, tolerance: f64 },

    #[error("cover error: {0}")]
    Cover(String),

    #[error("sample has {available} points, {needed} requested")]
    InsufficientSample { needed: usize, available: usize },

    #[error("integration contour cannot clear the level set: {0}")]
    ContourTooClose(String),

    #[error("approximation coefficients grow at degree {degree}")]
    SeriesDiverging { degree: usize },

    #[error("no degree up to {max_degree} certifies level {nu}: graph {graph:.4}, box {box_bound:.4}, off-graph {offgraph:.4}")]
    ScheduleExhausted { nu: usize, max_degree: usize, graph: f64, box_bound: f64, offgraph: f64 },

    #[error("unsupported function family: {0}")]
    UnsupportedFamily(String),

    #[error("threshold {threshold} too small: cover disk {index} reaches the origin")]
    ThresholdTooSmall { threshold: f64, index: usize },

    #[error("annulus depth {depth} underflows double precision")]
    DepthOverflow { depth: usize },

    #[error("base point lies in the interior of the set")]
    DivergentBase,

    #[error("walk starts inside the target")]
    StartInsideTarget,

    #[error("walk starts inside an obstacle")]
    StartInsideObstacle,

    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),

    #[error("invalid bounds: need H > C (got H = {h}, C = {c})")]
    InvalidBounds { h: f64, c: f64 },

    #[error("sampled sequence has no certified tail bound")]
    TailUncertifiable,

    #[error("probe value equals the function value")]
    ProbeEqualsValue,

    #[error("schedule entry {index}: {source}")]
    Schedule { index: usize, source: Box<Error> },
}

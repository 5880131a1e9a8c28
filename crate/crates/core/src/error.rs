use thiserror::Error;

use crate::geometry::Point2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} lies outside the playable region")]
    OutsideWorld(Point2),

    #[error("invalid world: {0}")]
    InvalidWorld(String),

    #[error("shortest-path metric is not differentiable at ({0}, {1})")]
    NonDifferentiable(Point2, Point2),

    #[error("coincident foci at {0}")]
    CoincidentFoci(Point2),

    #[error("degenerate dominance region: {0}")]
    DegenerateRegion(String),

    #[error("no sign change of the boundary function on [0, {upper}]")]
    BracketFailure { upper: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("strategy not applicable: {0}")]
    StrategyInapplicable(String),

    #[error("capture already occurred (separation {0})")]
    CaptureOccurred(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("cannot parse scenario: {0}")]
    Parse(String),

    #[error("unknown check or suite `{0}`")]
    UnknownCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

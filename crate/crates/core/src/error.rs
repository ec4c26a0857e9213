use thiserror::Error;

/// Every failure the geometry, measure and experiment layers can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("cutting plane misses the interior of the body (t = {t})")]
    EmptyCap { t: f64 },
    #[error("direction is not an outward support normal at the given point: {0}")]
    NotSupportNormal(String),
    #[error("cap base has zero area")]
    DegenerateCap,
    #[error("point is not on the boundary of the body")]
    PointNotOnBoundary,
    #[error("point is not conical (normal cone dimension {dim} < {ambient})")]
    NotConical { dim: usize, ambient: usize },
    #[error("point is a ridge point (normal cone dimension {dim})")]
    RidgePoint { dim: usize },
    #[error("cone section is unbounded for this direction")]
    UnboundedCut,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("direction is not in the positive hull of the two edge normals")]
    NotInPositiveHull,
    #[error("ball of radius {radius} is not contained in the set")]
    BallNotContained { radius: f64 },
    #[error("body does not fit in the slab of height {t}")]
    NotInSlab { t: f64 },
    #[error("segments are not mutually orthogonal segments of equal length")]
    NotOrthogonal,
    #[error("point is not a regular boundary point")]
    NotRegularPoint,
    #[error("function is not convex: {0}")]
    NonConvexFunction(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl Error {
    /// Stable identifier printed by the CLI on failure.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::EmptyCap { .. } => "EmptyCap",
            Error::NotSupportNormal(_) => "NotSupportNormal",
            Error::DegenerateCap => "DegenerateCap",
            Error::PointNotOnBoundary => "PointNotOnBoundary",
            Error::NotConical { .. } => "NotConical",
            Error::RidgePoint { .. } => "RidgePoint",
            Error::UnboundedCut => "UnboundedCut",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::UnsupportedDimension(_) => "UnsupportedDimension",
            Error::NotInPositiveHull => "NotInPositiveHull",
            Error::BallNotContained { .. } => "BallNotContained",
            Error::NotInSlab { .. } => "NotInSlab",
            Error::NotOrthogonal => "NotOrthogonal",
            Error::NotRegularPoint => "NotRegularPoint",
            Error::NonConvexFunction(_) => "NonConvexFunction",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse(_) => "ParseError",
            Error::Io(_) => "FileNotFound",
            Error::CheckFailed { .. } => "CheckFailed",
        }
    }

    /// Process exit code: 1 usage, 2 I/O, 3 failed verification checks, 10
    /// and up for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::InvalidInput(_) => 1,
            Error::Io(_) => 2,
            Error::CheckFailed { .. } => 3,
            Error::DegenerateInput(_) => 10,
            Error::EmptyCap { .. } => 11,
            Error::NotSupportNormal(_) => 12,
            Error::DegenerateCap => 13,
            Error::PointNotOnBoundary => 14,
            Error::NotConical { .. } => 15,
            Error::RidgePoint { .. } => 16,
            Error::UnboundedCut => 17,
            Error::DimensionMismatch { .. } => 18,
            Error::UnsupportedDimension(_) => 19,
            Error::NotInPositiveHull => 20,
            Error::BallNotContained { .. } => 21,
            Error::NotInSlab { .. } => 22,
            Error::NotOrthogonal => 23,
            Error::NotRegularPoint => 24,
            Error::NonConvexFunction(_) => 25,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let all = [
            Error::DegenerateInput(String::new()),
            Error::EmptyCap { t: 1.0 },
            Error::NotSupportNormal(String::new()),
            Error::DegenerateCap,
            Error::PointNotOnBoundary,
            Error::NotConical { dim: 1, ambient: 3 },
            Error::RidgePoint { dim: 2 },
            Error::UnboundedCut,
            Error::DimensionMismatch { expected: 2, got: 3 },
            Error::UnsupportedDimension(5),
            Error::NotInPositiveHull,
            Error::BallNotContained { radius: 1.0 },
            Error::NotInSlab { t: 1.0 },
            Error::NotOrthogonal,
            Error::NotRegularPoint,
            Error::NonConvexFunction(String::new()),
            Error::Io(String::new()),
            Error::CheckFailed { failed: 1, total: 2 },
            Error::Parse(String::new()),
        ];
        let mut codes: Vec<i32> = all.iter().map(|e| e.exit_code()).collect();
        codes.sort();
        codes.dedup();
        assert_eq!(codes.len(), all.len());
        assert_eq!(Error::InvalidInput(String::new()).exit_code(), 1);
        assert_eq!(Error::Parse(String::new()).name(), "ParseError");
        assert_eq!(Error::Io(String::new()).name(), "FileNotFound");
    }
}

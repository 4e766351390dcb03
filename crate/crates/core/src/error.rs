use thiserror::Error;

/// Errors raised by the geometry, metric and center routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("points are not collinear")]
    NotCollinear,
    #[error("degenerate ratio: the reference point coincides with the second point")]
    DegenerateRatio,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("points are not in general position")]
    DegeneratePosition,
    #[error("singular linear system")]
    SingularSystem,
    #[error("invalid line coefficients")]
    InvalidLine,
    #[error("point ({x}, {y}) lies outside the domain")]
    PointOutside { x: f64, y: f64 },
    #[error("point ({x}, {y}) is within the boundary guard of the domain")]
    NearBoundary { x: f64, y: f64 },
    #[error("body is not centrally symmetric")]
    NotSymmetric,
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(&'static str),
    #[error("point is mapped to the ideal line")]
    IdealPoint,
    #[error("point ({x}, {y}) is not a projective center (fit residual {residual:e})")]
    NotAProjectiveCenter { x: f64, y: f64, residual: f64 },
    #[error("point ({x}, {y}) is not a center of the space")]
    NotACenter { x: f64, y: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("projective image of the body is unbounded")]
    UnboundedImage,
    #[error("grid must be at least 2, got {0}")]
    GridTooSmall(usize),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

impl GeometryError {
    /// Variant name, stable across message changes.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NotCollinear => "NotCollinear",
            Self::DegenerateRatio => "DegenerateRatio",
            Self::DegenerateConfiguration(_) => "DegenerateConfiguration",
            Self::DegeneratePosition => "DegeneratePosition",
            Self::SingularSystem => "SingularSystem",
            Self::InvalidLine => "InvalidLine",
            Self::PointOutside { .. } => "PointOutside",
            Self::NearBoundary { .. } => "NearBoundary",
            Self::NotSymmetric => "NotSymmetric",
            Self::ParameterOutOfRange(_) => "ParameterOutOfRange",
            Self::IdealPoint => "IdealPoint",
            Self::NotAProjectiveCenter { .. } => "NotAProjectiveCenter",
            Self::NotACenter { .. } => "NotACenter",
            Self::DegenerateInput(_) => "DegenerateInput",
            Self::InvalidBody(_) => "InvalidBody",
            Self::UnboundedImage => "UnboundedImage",
            Self::GridTooSmall(_) => "GridTooSmall",
        }
    }
}

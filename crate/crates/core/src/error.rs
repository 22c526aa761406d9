use thiserror::Error;

/// Errors raised by constructors and operations that have preconditions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("determinant {det} is not positive")]
    NonPositiveDeterminant { det: f64 },
    #[error("determinant {det} differs from 1 beyond tolerance")]
    DeterminantNotOne { det: f64 },
    #[error("matrix trace {trace} is not zero")]
    NotTraceless { trace: f64 },
    #[error("upper half plane coordinate y must be positive, got {y}")]
    NonPositiveY { y: f64 },
    #[error("holomorphic sectional curvature must satisfy c < -3, got {c}")]
    InvalidCurvature { c: f64 },
    #[error("pair is not in the reductive complement")]
    NotInComplement,
    #[error("exp(sX) is not a geodesic for this X")]
    NotGeodesic,
    #[error("velocity must be non-zero")]
    ZeroVelocity,
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("integration step at s = {s} produced determinant {det}")]
    StepCollapsed { s: f64, det: f64 },
}

use num_complex::Complex64;
use thiserror::Error;

use crate::hyperbolic::IsometryClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {0} is not in the open unit disc")]
    OutsideDisc(Complex64),
    #[error("point {0} is not in the open upper half-plane")]
    OutsideHalfPlane(Complex64),
    #[error("element is {0:?}, expected hyperbolic")]
    NotHyperbolic(IsometryClass),
    #[error("rotation number estimate {value} is not within {tol} of an integer")]
    RotationRounding { value: f64, tol: f64 },
    #[error("boundary trajectory jumps by {step} between samples; refine the path")]
    LiftDiscontinuity { step: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("membership formulations disagree: {0}")]
    Inconsistent(String),
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;

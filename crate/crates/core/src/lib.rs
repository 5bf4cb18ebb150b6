//! Hyperbolic isometries, flat connections, their moduli, and a
//! least-squares Cauchy–Riemann solver for maps into the hyperbolic plane.

pub mod connections;
pub mod cr;
pub mod error;
pub mod exec;
pub mod hyperbolic;
pub mod moduli;

pub use error::{Error, Result};
pub use exec::Execution;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Infinitesimal isometry of one of the two model targets.
///
/// The induced vector field is holomorphic in both models, so it is
/// represented by a single complex function `X(w)` with `X = X(w) ∂_w`.
pub trait InfinitesimalIsometry {
    fn field(&self, w: Complex64) -> Complex64;
    /// Complex derivative `dX/dw`.
    fn field_derivative(&self, w: Complex64) -> Complex64;
    /// Hamiltonian of the field, evaluated without a domain check.
    fn hamiltonian_unchecked(&self, w: Complex64) -> f64;
}

pub trait LieAlgebraElement:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + InfinitesimalIsometry
{
    fn zero() -> Self;
    /// Matrix commutator of the generators.
    fn bracket(&self, other: &Self) -> Self;
    fn norm(&self) -> f64;
}

/// The structure groups used by connections: affine maps of the line
/// and `PU(1,1)`.
pub trait IsometryGroup: Copy + Debug + PartialEq + Send + Sync {
    type Algebra: LieAlgebraElement;

    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn exp(generator: &Self::Algebra, t: f64) -> Self;
    /// `g γ g⁻¹`.
    fn adjoint(&self, generator: &Self::Algebra) -> Self::Algebra;
    fn distance(&self, other: &Self) -> f64;
    /// Right logarithmic derivative `(dΦ)Φ⁻¹` at `cur`, where `dΦ` is the
    /// finite-difference stencil `Σ wᵢ Φᵢ` over matrix representatives.
    fn log_derivative(stencil: &[(f64, Self)], cur: &Self) -> Self::Algebra;

    /// Centered difference `(next - prev) / span`.
    fn centered_log_derivative(prev: &Self, next: &Self, cur: &Self, span: f64) -> Self::Algebra {
        Self::log_derivative(&[(-1.0 / span, *prev), (1.0 / span, *next)], cur)
    }
    /// Action on the model target (disc or half-plane). No domain check.
    fn act(&self, w: Complex64) -> Complex64;
}

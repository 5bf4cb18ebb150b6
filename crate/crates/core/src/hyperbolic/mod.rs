//! Isometry groups of the half-plane and disc models, their Lie algebras,
//! induced vector fields and Hamiltonians.

pub mod affine;
pub mod boundary;
pub mod disc;
pub mod germ;
pub mod group;
pub mod moebius;

pub use affine::{hamiltonian_halfplane, AffLieElement, AffMap};
pub use boundary::{normalize_angle, wrap_to_pi, BoundaryPoint, LiftedPoint};
pub use disc::{cayley, cayley_inverse, hamiltonian_disc, poisson_residual, vector_field_disc};
pub use germ::GeodesicGerm;
pub use group::{InfinitesimalIsometry, IsometryGroup, LieAlgebraElement};
pub use moebius::{IsometryClass, LieElement, MoebiusMap, CLASSIFY_TOL};

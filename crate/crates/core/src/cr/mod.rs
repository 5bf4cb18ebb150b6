//! Discrete Cauchy–Riemann problems for maps into the hyperbolic plane.

pub mod bc;
pub mod cylinder;
pub mod energy;
pub mod mesh;
pub mod model;
pub mod schwarz;
pub mod solver;

pub use bc::{BoundaryCondition, NodeConstraint};
pub use cylinder::{cylinder_bound, cylinder_feasibility_experiment, CylinderOptions, CylinderReport, SeedOutcome};
pub use energy::{beta_form, energy_geom, energy_top, omega_integral, EnergyReport};
pub use mesh::{DomainSpec, Mesh, Shape};
pub use model::{Disc, GridConnection, GridMap, HalfPlane, ModelTag, TargetModel};
pub use schwarz::{
    extremal_ratio, integrate, schwarz_integral, schwarz_integral_extrapolated, schwarz_pick_ratio, SampledFunction, DEFAULT_TOL,
};
pub use solver::{cr_residual, solve_cr, Outcome, SolveReport, SolverOptions};

//! Geometric and topological energies and the boundary one-form `β_A`.
//!
//! Norms of linear maps `TS → TW` are half the Hilbert–Schmidt norm, so the
//! energy density is `½(|u_x - X_x|² + |u_y - X_y|²) / m(u)²` with `m` the
//! conformal denominator of the target metric. For solutions this equals
//! the pullback of `ω_A`.
//!
//! `∫ v*ω_A` is evaluated as `Σ_cells ∮ θ_A` with
//! `θ_A = θ - H_{a_x} dx - H_{a_y} dy` and the midpoint rule on every edge.
//! Interior edges cancel, so the result is unchanged by any perturbation
//! supported away from the boundary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bc::{BoundaryCondition, NodeConstraint};
use super::mesh::Mesh;
use super::model::{GridConnection, GridMap, TargetModel};
use super::solver::cell_derivatives;
use crate::error::Result;
use crate::hyperbolic::{wrap_to_pi, GeodesicGerm, InfinitesimalIsometry, LieAlgebraElement};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `∫ ‖Du - X_A‖²`, half-norm convention.
    pub geom: f64,
    /// `∫ v*ω_A - ∫_{∂S} v*β_A`.
    pub top: f64,
    /// `∫_{∂S} v*β_A` over the germ part of the boundary.
    pub boundary_term: f64,
}

impl EnergyReport {
    /// `geom - top - boundary_term`, which vanishes up to quadrature error
    /// for solutions.
    pub fn closure(&self) -> f64 {
        self.geom - self.top - self.boundary_term
    }
}

pub fn energy_geom<M: TargetModel>(mesh: &Mesh, u: &GridMap, conn: &GridConnection<M::Algebra>) -> Result<f64> {
    u.check::<M>(mesh)?;
    conn.check(mesh)?;
    let area = mesh.cell_area();
    Ok(mesh
        .cells()
        .iter()
        .map(|c| {
            let (ux, uy, uc) = cell_derivatives(mesh, c, &u.values);
            let (ax, ay) = conn.mean(c);
            let m = M::denominator(uc);
            area * 0.5 * ((ux - ax.field(uc)).norm_sqr() + (uy - ay.field(uc)).norm_sqr()) / (m * m)
        })
        .sum())
}

fn theta_edge<M: TargetModel>(mesh: &Mesh, u: &[Complex64], conn: &GridConnection<M::Algebra>, p: usize, q: usize) -> f64 {
    let mid = 0.5 * (u[p] + u[q]);
    let dz = mesh.displacement(p, q);
    let (ax, ay) = conn.mean(&[p, q]);
    M::theta(mid, u[q] - u[p]) - ax.hamiltonian_unchecked(mid) * dz.re - ay.hamiltonian_unchecked(mid) * dz.im
}

/// `∫ v*ω_A` as a sum of cell boundary integrals of `θ_A`.
pub fn omega_integral<M: TargetModel>(mesh: &Mesh, u: &GridMap, conn: &GridConnection<M::Algebra>) -> Result<f64> {
    u.check::<M>(mesh)?;
    conn.check(mesh)?;
    Ok(mesh
        .cells()
        .iter()
        .map(|c| (0..4).map(|k| theta_edge::<M>(mesh, &u.values, conn, c[k], c[(k + 1) % 4])).sum::<f64>())
        .sum())
}

/// Germ halfway between two germs, in the sense of endpoint angles.
fn midpoint_germ(a: &GeodesicGerm, b: &GeodesicGerm) -> Result<GeodesicGerm> {
    let e = a.endpoint().angle() + 0.5 * wrap_to_pi(b.endpoint().angle() - a.endpoint().angle());
    let o = a.opposite_endpoint().angle() + 0.5 * wrap_to_pi(b.opposite_endpoint().angle() - a.opposite_endpoint().angle());
    GeodesicGerm::from_endpoints(crate::hyperbolic::BoundaryPoint::new(e), crate::hyperbolic::BoundaryPoint::new(o))
}

fn beta_edge<M: TargetModel>(
    mesh: &Mesh,
    u: &[Complex64],
    conn: &GridConnection<M::Algebra>,
    (p, q): (usize, usize),
    (gp, gq): (&GeodesicGerm, &GeodesicGerm),
) -> Result<f64> {
    let mid = 0.5 * (u[p] + u[q]);
    let germ = midpoint_germ(gp, gq)?;
    let de = wrap_to_pi(gq.endpoint().angle() - gp.endpoint().angle());
    let dop = wrap_to_pi(gq.opposite_endpoint().angle() - gp.opposite_endpoint().angle());
    let alpha = M::germ_generator(&germ, de, dop).unwrap_or_else(M::Algebra::zero);
    let dz = mesh.displacement(p, q);
    let (ax, ay) = conn.mean(&[p, q]);
    let a_edge = ax * dz.re + ay * dz.im;
    Ok(alpha.hamiltonian_unchecked(mid) - a_edge.hamiltonian_unchecked(mid))
}

/// Both energies and the boundary correction.
pub fn energy_top<M: TargetModel>(
    mesh: &Mesh,
    u: &GridMap,
    conn: &GridConnection<M::Algebra>,
    bc: &BoundaryCondition,
) -> Result<EnergyReport> {
    let geom = energy_geom::<M>(mesh, u, conn)?;
    let omega = omega_integral::<M>(mesh, u, conn)?;
    bc.check(mesh, M::TAG)?;
    let mut boundary_term = 0.0;
    for &(p, q) in mesh.boundary_edges() {
        if let (Some(NodeConstraint::Germ(gp)), Some(NodeConstraint::Germ(gq))) = (bc.get(p), bc.get(q)) {
            boundary_term += beta_edge::<M>(mesh, &u.values, conn, (p, q), (gp, gq))?;
        }
    }
    Ok(EnergyReport { geom, top: omega - boundary_term, boundary_term })
}

/// `β_A(ξ) = H_α - H_{A(ξ)}` sampled along a germ at the given distances
/// from its anchor. `α` is the least-norm generator moving the germ's
/// endpoints at the given rates, plus `alpha_shift` times the translation
/// along the germ; the result does not depend on the shift.
pub fn beta_form(
    a_xi: &crate::hyperbolic::LieElement,
    germ: &GeodesicGerm,
    endpoint_rate: f64,
    opposite_rate: f64,
    alpha_shift: f64,
    distances: &[f64],
) -> Vec<f64> {
    let alpha = germ.transporting_generator(endpoint_rate, opposite_rate) + germ.tangent_generator() * alpha_shift;
    let beta = alpha - *a_xi;
    distances.iter().map(|&d| beta.hamiltonian_unchecked(germ.point_at(d))).collect()
}

//! The length bound for twisted Cauchy–Riemann equations on cylinders and a
//! multi-seed solver experiment probing it.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bc::BoundaryCondition;
use super::mesh::{DomainSpec, Mesh, Shape, MIN_RESOLUTION};
use super::model::{Disc, GridConnection, GridMap};
use super::solver::{solve_cr, Outcome, SolverOptions};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::moduli::construct_ptau_loop_within;

/// `L(τ) = π / (2 log(τ/2 + √(τ²/4 - 1)))`, the longest cylinder carrying a
/// solution for a hyperbolic holonomy of trace `τ`.
pub fn cylinder_bound(tau: f64) -> Result<f64> {
    if !(tau > 2.0) || !tau.is_finite() {
        return Err(Error::InvalidArgument(format!("τ must exceed 2, got {tau}")));
    }
    // acosh(1 + δ) written with ln_1p so that τ → 2⁺ keeps full precision
    let delta = 0.5 * (tau - 2.0);
    let acosh = (delta + (delta * (2.0 + delta)).sqrt()).ln_1p();
    Ok(PI / (2.0 * acosh))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CylinderOptions {
    /// Cells per unit length in both directions.
    pub cells_per_unit: usize,
    /// Seed of the connection drawn from `P_τ(S¹)`.
    pub connection_seed: u64,
    /// Largest hyperbolic distance of the conjugating element from a
    /// rotation.
    pub conjugation_reach: f64,
    /// Samples of the loop connection.
    pub loop_nodes: usize,
    /// Largest modulus of the jittered constant initial guesses.
    pub jitter: f64,
    pub solver: SolverOptions,
}

impl Default for CylinderOptions {
    fn default() -> Self {
        Self {
            cells_per_unit: 32,
            connection_seed: 0,
            conjugation_reach: 0.25,
            loop_nodes: 256,
            jitter: 0.3,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub outcome: Outcome,
    pub residual: f64,
    pub iterations: usize,
    pub max_modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderReport {
    pub tau: f64,
    pub length: f64,
    pub bound: f64,
    pub resolution: (usize, usize),
    pub runs: Vec<SeedOutcome>,
}

impl CylinderReport {
    pub fn interior_convergences(&self) -> usize {
        self.runs.iter().filter(|r| r.outcome == Outcome::ConvergedInterior).count()
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.runs.iter().filter(|r| r.outcome == outcome).count()
    }
}

/// Solves `∂_s u + i(∂_t u - X_{a_t}(u)) = 0` on `[0, l] × S¹`, ends free,
/// from one jittered constant initial guess per seed. `a_t` is a loop in
/// `P_τ(S¹)` built by the moduli module.
pub fn cylinder_feasibility_experiment(
    tau: f64,
    length: f64,
    seeds: &[u64],
    opts: &CylinderOptions,
    exec: Execution,
) -> Result<CylinderReport> {
    let bound = cylinder_bound(tau)?;
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidArgument(format!("cylinder length must be positive, got {length}")));
    }
    let nt = opts.cells_per_unit.max(MIN_RESOLUTION);
    let ns = ((length * nt as f64).round() as usize).max(MIN_RESOLUTION);
    let mesh = Mesh::new(DomainSpec::new(Shape::Cylinder { length }, ns, nt))?;
    let datum = construct_ptau_loop_within(tau, opts.connection_seed, opts.loop_nodes, opts.conjugation_reach)?;
    let conn = GridConnection::pullback_t(&mesh, &datum.connection);
    let bc = BoundaryCondition::free();

    let runs = exec.map(seeds.to_vec(), |seed| -> Result<SeedOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w0 = Complex64::from_polar(opts.jitter * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
        let guess = GridMap::constant::<Disc>(&mesh, w0);
        let rep = solve_cr::<Disc>(&mesh, &conn, &bc, &guess, &opts.solver)?;
        Ok(SeedOutcome {
            seed,
            outcome: rep.outcome,
            residual: rep.residual,
            iterations: rep.iterations,
            max_modulus: rep.map.values.iter().map(|w| w.norm()).fold(0.0, f64::max),
        })
    });
    Ok(CylinderReport { tau, length, bound, resolution: (ns, nt), runs: runs.into_iter().collect::<Result<_>>()? })
}

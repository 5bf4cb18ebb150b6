//! Manufactured boundary value problems shared by the solver tests and the
//! acceptance target.

#![allow(dead_code)]

use std::f64::consts::TAU;

use hypflat_core::cr::{
    schwarz_pick_ratio, solve_cr, BoundaryCondition, Disc, DomainSpec, GridConnection, GridMap, HalfPlane, Mesh, ModelTag, Shape,
    SolveReport, SolverOptions, TargetModel,
};
use hypflat_core::hyperbolic::{
    cayley, cayley_inverse, AffMap, BoundaryPoint, GeodesicGerm, IsometryGroup, LieElement, MoebiusMap,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Five problems with known smooth solutions. The half-plane cases carry
/// vertical-line conditions on a rectangle, the disc cases geodesic germs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    /// `u = i/(z+1)`, `A = 0`.
    Reciprocal,
    /// `u = i e^{z/2} + z²/5` on `[0,2]×[0,1]`, `A = 0`.
    Exponential,
    /// An affine gauge transform of the exponential case.
    AffineGauge,
    /// `u = C⁻¹(i e^{3z/10})` with germs ending at `1`, `A = 0`.
    DiscGerms,
    /// A `PU(1,1)` gauge transform of a disc germ problem.
    DiscGauge,
}

pub const CASES: [Case; 5] = [Case::Reciprocal, Case::Exponential, Case::AffineGauge, Case::DiscGerms, Case::DiscGauge];

pub fn affine_gauge(z: Complex64) -> AffMap {
    AffMap::new((0.3 * z.re - 0.2 * z.re * z.im).exp(), 0.4 * z.im + 0.1 * z.re * z.re).unwrap()
}

pub fn disc_gauge(z: Complex64) -> MoebiusMap {
    let a = LieElement::new(0.3 * z.re, c(0.1 * z.im, 0.05)).exp(1.0);
    let b = LieElement::new(0.1, c(0.0, 0.2 * z.re * z.im)).exp(1.0);
    a.compose(&b)
}

fn exponential(z: Complex64) -> Complex64 {
    I * (0.5 * z).exp() + 0.2 * z * z
}

/// The holomorphic half-plane map behind a disc case.
fn disc_dagger(z: Complex64) -> Complex64 {
    I * (0.3 * z).exp()
}

fn disc_dagger_gauged(z: Complex64) -> Complex64 {
    I * (1.0 + 0.2 * z) + 0.1 * z * z
}

/// Germ carrying the image of the vertical line through `re w`.
pub fn line_germ(w: Complex64) -> GeodesicGerm {
    GeodesicGerm::new(BoundaryPoint::new(0.0), cayley_inverse(c(w.re, 1.0)).unwrap()).unwrap()
}

impl Case {
    pub fn length(self) -> f64 {
        match self {
            Case::Exponential | Case::AffineGauge => 2.0,
            _ => 1.0,
        }
    }

    pub fn exact(self, z: Complex64) -> Complex64 {
        match self {
            Case::Reciprocal => I / (z + 1.0),
            Case::Exponential => exponential(z),
            Case::AffineGauge => affine_gauge(z).act(exponential(z)),
            Case::DiscGerms => cayley_inverse(disc_dagger(z)).unwrap(),
            Case::DiscGauge => disc_gauge(z).apply(cayley_inverse(disc_dagger_gauged(z)).unwrap()),
        }
    }

    pub fn mesh(self, n: usize) -> Mesh {
        let l = self.length();
        Mesh::new(DomainSpec::new(Shape::Rectangle { length: l }, (l * n as f64).round() as usize, n)).unwrap()
    }

    fn pinned(self, mesh: &Mesh, bc: BoundaryCondition) -> BoundaryCondition {
        // one node per sublattice of the box scheme
        let (a, b) = (mesh.find(0, 0).unwrap(), mesh.find(1, 0).unwrap());
        bc.pin(a, self.exact(mesh.position(a))).pin(b, self.exact(mesh.position(b)))
    }

    /// Solves the case at resolution `n` per unit length from a constant
    /// initial guess and returns the report and the sup-norm error.
    pub fn solve(self, n: usize) -> (SolveReport, f64) {
        let mesh = self.mesh(n);
        let opts = SolverOptions::default();
        let exact = |m: &Mesh| GridMap::from_fn::<HalfPlane>(m, |z| self.exact(z));
        let rep = match self {
            Case::Reciprocal | Case::Exponential | Case::AffineGauge => {
                let bc = self.pinned(&mesh, BoundaryCondition::lines(&mesh, |z| self.exact(z).re));
                let conn = match self {
                    Case::AffineGauge => GridConnection::from_gauge(&mesh, affine_gauge),
                    _ => GridConnection::zero(&mesh),
                };
                solve_cr::<HalfPlane>(&mesh, &conn, &bc, &constant_guess::<HalfPlane>(&mesh, self), &opts).unwrap()
            }
            Case::DiscGerms => {
                let bc = self.pinned(&mesh, BoundaryCondition::germs(&mesh, |z| line_germ(disc_dagger(z))));
                let conn = GridConnection::zero(&mesh);
                solve_cr::<Disc>(&mesh, &conn, &bc, &constant_guess::<Disc>(&mesh, self), &opts).unwrap()
            }
            Case::DiscGauge => {
                let germ = |z: Complex64| line_germ(disc_dagger_gauged(z)).transformed(&disc_gauge(z));
                let bc = self.pinned(&mesh, BoundaryCondition::germs(&mesh, germ));
                let conn = GridConnection::from_gauge(&mesh, disc_gauge);
                solve_cr::<Disc>(&mesh, &conn, &bc, &constant_guess::<Disc>(&mesh, self), &opts).unwrap()
            }
        };
        let err = rep.map.sup_distance(&exact(&mesh));
        (rep, err)
    }
}

/// A constant map at the exact solution's mean. In the half-plane the
/// height is the lowest one of the solution instead, since the escape
/// margin scales with the lowest height of the initial guess.
fn constant_guess<M: TargetModel>(mesh: &Mesh, case: Case) -> GridMap {
    let values: Vec<Complex64> = mesh.nodes().iter().map(|p| case.exact(p.z)).collect();
    let mut w = values.iter().sum::<Complex64>() / values.len() as f64;
    if M::TAG == ModelTag::HalfPlane {
        w.im = values.iter().map(|v| v.im).fold(f64::INFINITY, f64::min);
    }
    GridMap::constant::<M>(mesh, w)
}

/// The disc problem that [`Case::DiscGauge`] gauge transforms, solved
/// directly with `A = 0`. Returns the report and its sup-norm error.
pub fn solve_disc_pregauge(n: usize) -> (SolveReport, f64) {
    let mesh = Case::DiscGauge.mesh(n);
    let exact = |z: Complex64| cayley_inverse(disc_dagger_gauged(z)).unwrap();
    let (a, b) = (mesh.find(0, 0).unwrap(), mesh.find(1, 0).unwrap());
    let bc = BoundaryCondition::germs(&mesh, |z| line_germ(disc_dagger_gauged(z)))
        .pin(a, exact(mesh.position(a)))
        .pin(b, exact(mesh.position(b)));
    let guess = GridMap::constant::<Disc>(&mesh, c(0.0, 0.0));
    let rep = solve_cr::<Disc>(&mesh, &GridConnection::zero(&mesh), &bc, &guess, &SolverOptions::default()).unwrap();
    let err = rep.map.sup_distance(&GridMap::from_fn::<Disc>(&mesh, exact));
    (rep, err)
}

/// A converged `A = 0` solution on a disc or half-disc grid, with the
/// Schwarz–Pick ratio of the discrete map.
pub struct PickRun {
    pub shape: Shape,
    pub h: f64,
    pub residual: f64,
    pub ratio: f64,
}

/// `u = C(ρ M(z))` for a random disc automorphism `M` and `ρ ∈ [0.6, 1]`.
fn random_disc_solution(rng: &mut impl Rng) -> impl Fn(Complex64) -> Complex64 {
    let p = Complex64::from_polar(0.6 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU));
    let m = MoebiusMap::rotation(rng.gen_range(0.0..TAU)).compose(&MoebiusMap::translation_to(p).unwrap());
    let rho = rng.gen_range(0.6..1.0);
    move |z| cayley(rho * m.apply(z)).unwrap()
}

/// `u = i c (1+ζ)/(1-ζ)` with `ζ = ρ(z²-a)/(1-az²)`, which has `re u = 0`
/// on the imaginary axis.
fn random_half_disc_solution(rng: &mut impl Rng) -> impl Fn(Complex64) -> Complex64 {
    let (scale, rho, a) = (rng.gen_range(0.5..2.0), rng.gen_range(0.6..1.0), rng.gen_range(-0.5..0.5));
    move |z| {
        let z2 = z * z;
        let zeta = rho * (z2 - a) / (1.0 - a * z2);
        I * scale * (1.0 + zeta) / (1.0 - zeta)
    }
}

/// Solves from the sampled smooth solution plus noise of relative size
/// `1e-3`, so that the solver lands on a nearby discrete solution.
pub fn pick_run(shape: Shape, n: usize, seed: u64) -> PickRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = Mesh::new(DomainSpec::new(shape, n, n)).unwrap();
    let exact: Box<dyn Fn(Complex64) -> Complex64> = match shape {
        Shape::HalfDisc => Box::new(random_half_disc_solution(&mut rng)),
        _ => Box::new(random_disc_solution(&mut rng)),
    };
    let guess = GridMap::new(
        ModelTag::HalfPlane,
        mesh.nodes()
            .iter()
            .map(|p| {
                let w = exact(p.z);
                w + w.im * 1e-3 * c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })
            .collect(),
    );
    let bc = BoundaryCondition::lines(&mesh, |_| 0.0);
    let rep = solve_cr::<HalfPlane>(&mesh, &GridConnection::zero(&mesh), &bc, &guess, &SolverOptions::default()).unwrap();
    assert!(rep.converged(), "{shape:?} seed {seed}: {:?} residual {:e}", rep.outcome, rep.residual);
    PickRun { shape, h: mesh.h(), residual: rep.residual, ratio: schwarz_pick_ratio(&mesh, &rep.map).unwrap() }
}

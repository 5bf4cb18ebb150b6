//! Gauss–Newton solver for the discrete Cauchy–Riemann problem
//! `(Du - X_A)^{0,1} = 0` with boundary constraints.
//!
//! `Du` is discretised by centred differences at cell centres (the box
//! scheme), with `X_A` evaluated at the average of the four corner values.
//! Each cell contributes the complex residual
//! `√area · ½[(u_x - X_{a_x}) + i(u_y - X_{a_y})]`. The scheme cannot see
//! the checkerboard mode, so with line or germ conditions the discrete
//! solution is unique only after pinning two adjacent nodes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bc::{BoundaryCondition, NodeConstraint};
use super::mesh::Mesh;
use super::model::{GridConnection, GridMap, ModelTag, TargetModel};
use crate::error::{Error, Result};
use crate::hyperbolic::{GeodesicGerm, InfinitesimalIsometry};

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_DAMPING_STEPS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Target for the area-weighted L² residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Iterates are flagged as escaping when `|w| > 1 - c` (disc) or
    /// `im w < c·m` (half-plane, `m` the smallest imaginary part of the
    /// initial guess), where `c = min(f·h, 1/2)`.
    pub escape_factor: f64,
    pub linear_tol: f64,
    pub linear_max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 40, escape_factor: 10.0, linear_tol: 1e-13, linear_max_iter: 20_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    ConvergedInterior,
    Escape,
    Plateau,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub map: GridMap,
    pub outcome: Outcome,
    pub residual: f64,
    pub iterations: usize,
    pub stayed_inside: bool,
    /// Residual after each accepted step, starting with the initial guess.
    pub history: Vec<f64>,
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.outcome == Outcome::ConvergedInterior
    }
}

#[derive(Clone, Copy, Debug)]
enum Param {
    Free(usize),
    Line(f64, usize),
    Germ(GeodesicGerm, usize),
    Fixed(Complex64),
}

struct Layout {
    params: Vec<Param>,
    ndof: usize,
}

impl Layout {
    fn new(n: usize, bc: &BoundaryCondition) -> Self {
        let mut ndof = 0;
        let mut take = |k: usize| {
            let o = ndof;
            ndof += k;
            o
        };
        let params = (0..n)
            .map(|k| match (bc.pinned(k), bc.get(k)) {
                (Some(w), _) => Param::Fixed(w),
                (None, None) => Param::Free(take(2)),
                (None, Some(NodeConstraint::Line(l))) => Param::Line(*l, take(1)),
                (None, Some(NodeConstraint::Germ(g))) => Param::Germ(*g, take(1)),
            })
            .collect();
        Self { params, ndof }
    }

    fn initial(&self, guess: &[Complex64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ndof];
        for (p, w) in self.params.iter().zip(guess) {
            match *p {
                Param::Free(o) => {
                    x[o] = w.re;
                    x[o + 1] = w.im;
                }
                Param::Line(_, o) => x[o] = w.im,
                Param::Germ(g, o) => x[o] = g.parameter_of(*w),
                Param::Fixed(_) => {}
            }
        }
        x
    }

    fn value(&self, k: usize, x: &[f64]) -> Complex64 {
        match self.params[k] {
            Param::Free(o) => Complex64::new(x[o], x[o + 1]),
            Param::Line(l, o) => Complex64::new(l, x[o]),
            Param::Germ(g, o) => g.point_at(x[o]),
            Param::Fixed(w) => w,
        }
    }

    fn values(&self, x: &[f64]) -> Vec<Complex64> {
        (0..self.params.len()).map(|k| self.value(k, x)).collect()
    }

    /// `(dof, ∂w/∂x_dof)` pairs for node `k`.
    fn tangents(&self, k: usize, x: &[f64]) -> [Option<(usize, Complex64)>; 2] {
        match self.params[k] {
            Param::Free(o) => [Some((o, Complex64::new(1.0, 0.0))), Some((o + 1, I))],
            Param::Line(_, o) => [Some((o, I)), None],
            Param::Germ(g, o) => [Some((o, g.tangent_at(x[o]))), None],
            Param::Fixed(_) => [None, None],
        }
    }
}

/// Box-scheme weights for `u_x` and `u_y` over the corners of a cell.
fn weights(mesh: &Mesh) -> ([f64; 4], [f64; 4]) {
    let (hs, ht) = mesh.spacing();
    let a = 0.5 / hs;
    let b = 0.5 / ht;
    ([-a, a, a, -a], [-b, -b, b, b])
}

/// `(u_x, u_y, u_c)` of a cell.
pub(crate) fn cell_derivatives(mesh: &Mesh, corners: &[usize; 4], u: &[Complex64]) -> (Complex64, Complex64, Complex64) {
    let (wx, wy) = weights(mesh);
    let mut ux = Complex64::new(0.0, 0.0);
    let mut uy = Complex64::new(0.0, 0.0);
    let mut uc = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let v = u[corners[k]];
        ux += v * wx[k];
        uy += v * wy[k];
        uc += v * 0.25;
    }
    (ux, uy, uc)
}

fn cell_residual<A: InfinitesimalIsometry>(mesh: &Mesh, corners: &[usize; 4], u: &[Complex64], a: &(A, A)) -> Complex64 {
    let (ux, uy, uc) = cell_derivatives(mesh, corners, u);
    let sa = mesh.cell_area().sqrt();
    sa * 0.5 * ((ux - a.0.field(uc)) + I * (uy - a.1.field(uc)))
}

fn residuals<A: InfinitesimalIsometry>(mesh: &Mesh, u: &[Complex64], cell_conn: &[(A, A)]) -> Vec<Complex64> {
    mesh.cells().iter().zip(cell_conn).map(|(c, a)| cell_residual(mesh, c, u, a)).collect()
}

fn norm(r: &[Complex64]) -> f64 {
    r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Area-weighted L² norm of the discrete `(Du - X_A)^{0,1}`.
pub fn cr_residual<M: TargetModel>(mesh: &Mesh, u: &GridMap, conn: &GridConnection<M::Algebra>) -> Result<f64> {
    u.check::<M>(mesh)?;
    conn.check(mesh)?;
    let cc: Vec<_> = mesh.cells().iter().map(|c| conn.mean(c)).collect();
    Ok(norm(&residuals(mesh, &u.values, &cc)))
}

/// Jacobian stored cell by cell: the real rows of a cell are the real and
/// imaginary parts of `Σ coeff · x_dof`.
struct Jacobian {
    offsets: Vec<usize>,
    entries: Vec<(usize, Complex64)>,
    ndof: usize,
}

impl Jacobian {
    fn assemble<A: InfinitesimalIsometry>(
        mesh: &Mesh,
        layout: &Layout,
        x: &[f64],
        u: &[Complex64],
        cell_conn: &[(A, A)],
    ) -> Self {
        let (wx, wy) = weights(mesh);
        let sa = mesh.cell_area().sqrt();
        let mut offsets = Vec::with_capacity(mesh.cells().len() + 1);
        let mut entries = Vec::with_capacity(8 * mesh.cells().len());
        offsets.push(0);
        for (c, a) in mesh.cells().iter().zip(cell_conn) {
            let uc = c.iter().map(|&k| u[k]).sum::<Complex64>() * 0.25;
            let dx = a.0.field_derivative(uc) + I * a.1.field_derivative(uc);
            for k in 0..4 {
                let d = sa * (0.5 * Complex64::new(wx[k], wy[k]) - 0.125 * dx);
                for (dof, t) in layout.tangents(c[k], x).into_iter().flatten() {
                    entries.push((dof, d * t));
                }
            }
            offsets.push(entries.len());
        }
        Self { offsets, entries, ndof: layout.ndof }
    }

    fn apply(&self, v: &[f64], out: &mut [Complex64]) {
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.entries[self.offsets[c]..self.offsets[c + 1]].iter().map(|&(d, coeff)| coeff * v[d]).sum();
        }
    }

    fn apply_transpose(&self, y: &[Complex64], out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (c, yc) in y.iter().enumerate() {
            for &(d, coeff) in &self.entries[self.offsets[c]..self.offsets[c + 1]] {
                out[d] += (coeff.conj() * yc).re;
            }
        }
    }

    fn column_norms(&self) -> Vec<f64> {
        let mut n = vec![0.0; self.ndof];
        for &(d, coeff) in &self.entries {
            n[d] += coeff.norm_sqr();
        }
        n.into_iter().map(|s| if s > 0.0 { s.sqrt() } else { 1.0 }).collect()
    }
}

/// Damped least squares `min ‖J δ + r‖² + μ‖Sδ‖²` by CGLS in the column
/// scaled variables `Sδ`, `S` the column norms of `J`.
fn cgls(j: &Jacobian, r: &[Complex64], mu: f64, tol: f64, max_iter: usize) -> Vec<f64> {
    let scale = j.column_norms();
    let n = j.ndof;
    let mut y = vec![0.0; n];
    let mut res: Vec<Complex64> = r.iter().map(|z| -z).collect();
    let mut tmp = vec![0.0; n];
    let mut q = vec![Complex64::new(0.0, 0.0); r.len()];
    j.apply_transpose(&res, &mut tmp);
    let mut s: Vec<f64> = tmp.iter().zip(&scale).map(|(t, c)| t / c).collect();
    let mut p = s.clone();
    let mut gamma: f64 = s.iter().map(|v| v * v).sum();
    let stop = tol * tol * gamma;
    for _ in 0..max_iter {
        if gamma <= stop || gamma == 0.0 {
            break;
        }
        let ps: Vec<f64> = p.iter().zip(&scale).map(|(v, c)| v / c).collect();
        j.apply(&ps, &mut q);
        let delta = q.iter().map(|z| z.norm_sqr()).sum::<f64>() + mu * p.iter().map(|v| v * v).sum::<f64>();
        if delta <= 0.0 {
            break;
        }
        let alpha = gamma / delta;
        for k in 0..n {
            y[k] += alpha * p[k];
        }
        for (rk, qk) in res.iter_mut().zip(&q) {
            *rk -= alpha * qk;
        }
        j.apply_transpose(&res, &mut tmp);
        for k in 0..n {
            s[k] = tmp[k] / scale[k] - mu * y[k];
        }
        let g = s.iter().map(|v| v * v).sum::<f64>();
        let beta = g / gamma;
        gamma = g;
        for k in 0..n {
            p[k] = s[k] + beta * p[k];
        }
    }
    y.iter().zip(&scale).map(|(v, c)| v / c).collect()
}

struct Margin {
    model: ModelTag,
    bound: f64,
    width: f64,
}

impl Margin {
    /// Within a tenth of the margin width of the escape bound.
    fn pressed(&self, w: Complex64) -> bool {
        match self.model {
            ModelTag::Disc => w.norm() > self.bound - 0.1 * self.width,
            ModelTag::HalfPlane => w.im < self.bound * 1.1,
        }
    }

    fn violated(&self, w: Complex64) -> bool {
        match self.model {
            ModelTag::Disc => !(w.norm() <= self.bound),
            ModelTag::HalfPlane => !(w.im >= self.bound),
        }
    }

    fn clamp(&self, w: Complex64) -> Complex64 {
        if !self.violated(w) {
            return w;
        }
        match self.model {
            ModelTag::Disc if w.norm() > 0.0 && w.norm().is_finite() => w * (self.bound / w.norm()),
            ModelTag::Disc => Complex64::new(0.0, 0.0),
            ModelTag::HalfPlane => Complex64::new(if w.re.is_finite() { w.re } else { 0.0 }, self.bound),
        }
    }
}

/// A stall with the iterate pressed against the escape margin counts as an
/// escape: damping kept the iteration inside, but only the margin stopped it.
fn stalled(margin: &Margin, u: &[Complex64]) -> Outcome {
    if u.iter().any(|w| margin.pressed(*w)) {
        Outcome::Escape
    } else {
        Outcome::Plateau
    }
}

/// Solves the boundary value problem starting from `guess`.
///
/// Nonconvergence is reported through [`Outcome`], never as an error.
/// Errors are reserved for inconsistent inputs.
pub fn solve_cr<M: TargetModel>(
    mesh: &Mesh,
    conn: &GridConnection<M::Algebra>,
    bc: &BoundaryCondition,
    guess: &GridMap,
    opts: &SolverOptions,
) -> Result<SolveReport> {
    guess.check::<M>(mesh)?;
    conn.check(mesh)?;
    bc.check(mesh, M::TAG)?;
    let layout = Layout::new(mesh.len(), bc);
    let c = (opts.escape_factor * mesh.h()).min(0.5);
    let margin = Margin {
        model: M::TAG,
        width: c,
        bound: match M::TAG {
            ModelTag::Disc => 1.0 - c,
            ModelTag::HalfPlane => c * guess.values.iter().map(|w| w.im).fold(f64::INFINITY, f64::min),
        },
    };
    let cell_conn: Vec<_> = mesh.cells().iter().map(|c| conn.mean(c)).collect();

    let mut x = layout.initial(&guess.values);
    let mut u = layout.values(&x);
    if let Some(w) = u.iter().find(|w| margin.violated(**w)) {
        return Err(Error::Precondition(format!("initial value {w} is outside the escape margin")));
    }
    let mut r = residuals(mesh, &u, &cell_conn);
    let mut res = norm(&r);
    let mut history = vec![res];
    let mut mu = 0.0;
    let mut slow = 0;

    let finish = |u: Vec<Complex64>, outcome, res, iterations, history| SolveReport {
        map: GridMap::new(M::TAG, u),
        outcome,
        residual: res,
        iterations,
        stayed_inside: outcome != Outcome::Escape,
        history,
    };

    for iter in 0..opts.max_iter {
        if res < opts.tol {
            return Ok(finish(u, Outcome::ConvergedInterior, res, iter, history));
        }
        if layout.ndof == 0 {
            break;
        }
        let jac = Jacobian::assemble(mesh, &layout, &x, &u, &cell_conn);
        let mut accepted = false;
        let mut escaped = None;
        for _ in 0..MAX_DAMPING_STEPS {
            let step = cgls(&jac, &r, mu, opts.linear_tol, opts.linear_max_iter);
            let xt: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + b).collect();
            let ut = layout.values(&xt);
            let rt = residuals(mesh, &ut, &cell_conn);
            let rest = norm(&rt);
            mu = if mu == 0.0 { 1e-4 } else { mu * 10.0 };
            if !(rest.is_finite() && rest < res) {
                continue;
            }
            if ut.iter().any(|w| margin.violated(*w)) {
                // a decreasing step that leaves the margin; damp before giving up
                escaped = Some((ut, rest));
                continue;
            }
            slow = if rest > 0.5 * res { slow + 1 } else { 0 };
            x = xt;
            u = ut;
            r = rt;
            res = rest;
            history.push(res);
            mu = if mu <= 1e-3 { 0.0 } else { mu * 0.01 };
            accepted = true;
            break;
        }
        if !accepted {
            if let Some((ut, rest)) = escaped {
                history.push(rest);
                let clamped = ut.iter().map(|w| margin.clamp(*w)).collect();
                return Ok(finish(clamped, Outcome::Escape, rest, iter + 1, history));
            }
        }
        if !accepted || slow >= 8 {
            let outcome = stalled(&margin, &u);
            return Ok(finish(u, outcome, res, iter + 1, history));
        }
    }
    let outcome = if res < opts.tol { Outcome::ConvergedInterior } else { stalled(&margin, &u) };
    let n = history.len() - 1;
    Ok(finish(u, outcome, res, n, history))
}

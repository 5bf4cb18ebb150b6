//! The Schwarz integral on the upper half-plane and the Schwarz–Pick
//! check for discrete solutions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mesh::{Mesh, Shape};
use super::model::{GridMap, HalfPlane};
use super::solver::cell_derivatives;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_DEPTH: u32 = 60;

fn kronrod(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let pair = f(c - h * XGK[j]) + f(c + h * XGK[j]);
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm())
}

/// Bisects until each piece meets its share of the tolerance. Pieces too
/// small to split are accepted when their error is within the global
/// tolerance, since the shares then fall below rounding noise.
fn adapt(f: &impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64, global: f64, depth: u32) -> Result<Complex64> {
    let (k, err) = kronrod(f, a, b);
    if err <= tol.max(50.0 * f64::EPSILON * k.norm()) {
        return Ok(k);
    }
    if depth >= MAX_DEPTH || b - a <= 1e-13 * (a.abs() + b.abs()) {
        if err <= global {
            return Ok(k);
        }
        return Err(Error::Quadrature(format!("no convergence on [{a}, {b}] (error estimate {err:e})")));
    }
    let m = 0.5 * (a + b);
    Ok(adapt(f, a, m, 0.5 * tol, global, depth + 1)? + adapt(f, m, b, 0.5 * tol, global, depth + 1)?)
}

/// Adaptive Gauss–Kronrod quadrature of a complex integrand with absolute
/// tolerance `tol`.
pub fn integrate(f: impl Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("integration limits must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a > b {
        return Ok(-integrate(f, b, a, tol)?);
    }
    adapt(&f, a, b, tol, tol, 0)
}

pub const DEFAULT_TOL: f64 = 1e-13;

/// `u(z) = (i/π) ∫ γ(ζ) dζ / (z - ζ)` for `γ` supported in `[a, b]`.
///
/// When `re z` lies inside the support, `γ(re z)` is subtracted from the
/// integrand and its contribution `γ(x)·log((z-a)/(z-b))` added back in
/// closed form, which keeps the quadrature well conditioned as
/// `im z → 0`.
pub fn schwarz_integral(gamma: impl Fn(f64) -> f64, support: (f64, f64), z: Complex64, tol: f64) -> Result<Complex64> {
    let (a, b) = support;
    if !(z.im > 0.0) {
        return Err(Error::OutsideHalfPlane(z));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("support [{a}, {b}] is empty")));
    }
    let x = z.re;
    let total = if a < x && x < b {
        let gx = gamma(x);
        let f = |s: f64| Complex64::new(gamma(s) - gx, 0.0) / (z - s);
        let body = integrate(&f, a, x, 0.5 * tol)? + integrate(&f, x, b, 0.5 * tol)?;
        body + gx * ((z - a).ln() - (z - b).ln())
    } else {
        integrate(|s| Complex64::new(gamma(s), 0.0) / (z - s), a, b, tol)?
    };
    Ok(I / PI * total)
}

/// Schwarz integral of a decaying `γ` on all of `ℝ`: the truncations to
/// `[-R, R]` and `[-2R, 2R]` are combined as `(8u(2R) - u(R))/7`, which
/// removes the `R⁻³` term of the truncation error for `γ = O(ζ⁻²)`.
pub fn schwarz_integral_extrapolated(gamma: impl Fn(f64) -> f64, z: Complex64, r: f64, tol: f64) -> Result<Complex64> {
    let u1 = schwarz_integral(&gamma, (-r, r), z, tol)?;
    let u2 = schwarz_integral(&gamma, (-2.0 * r, 2.0 * r), z, tol)?;
    Ok((8.0 * u2 - u1) / 7.0)
}

/// A function given by samples, linearly interpolated and zero outside the
/// sampled range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl SampledFunction {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::Shape(format!("need matching samples, got {} and {}", x.len(), y.len())));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("sample abscissae must increase strictly".into()));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("samples must be finite".into()));
        }
        Ok(Self { x, y })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn eval(&self, s: f64) -> f64 {
        let (a, b) = self.support();
        if !(a..=b).contains(&s) {
            return 0.0;
        }
        let k = self.x.partition_point(|&v| v <= s).clamp(1, self.x.len() - 1);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let t = (s - x0) / (x1 - x0);
        self.y[k - 1] * (1.0 - t) + self.y[k] * t
    }
}

/// `‖Du‖_W (1-|z|²)/2` for the Möbius extremal `u = i(1+z)/(1-z)`,
/// evaluated from the closed-form derivative.
pub fn extremal_ratio(z: Complex64) -> f64 {
    let u = I * (1.0 + z) / (1.0 - z);
    let du = 2.0 * I / ((1.0 - z) * (1.0 - z));
    du.norm() / u.im * (1.0 - z.norm_sqr()) / 2.0
}

/// Largest Schwarz–Pick ratio `‖Du‖_W (1-|z|²)/2` over the cells of a disc
/// or half-disc mesh, for a half-plane valued map solving the problem with
/// `A = 0`. Derivatives and values are taken at cell centres; the norm of
/// `Du` is half the Hilbert–Schmidt norm, which equals `|u'|` for
/// holomorphic `u`. On the half-disc the lemma follows from the disc case
/// by reflection, `u(-z̄) = -conj(u(z))`, which preserves the ratio.
pub fn schwarz_pick_ratio(mesh: &Mesh, u: &GridMap) -> Result<f64> {
    if !matches!(mesh.spec().shape, Shape::Disc | Shape::HalfDisc) {
        return Err(Error::Precondition("the Schwarz–Pick check needs a disc or half-disc mesh".into()));
    }
    u.check::<HalfPlane>(mesh)?;
    Ok(mesh
        .cells()
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let (ux, uy, uc) = cell_derivatives(mesh, c, &u.values);
            let norm = (0.5 * (ux.norm_sqr() + uy.norm_sqr())).sqrt() / uc.im;
            norm * (1.0 - mesh.cell_center(k).norm_sqr()) / 2.0
        })
        .fold(0.0, f64::max))
}

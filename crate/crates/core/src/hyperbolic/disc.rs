//! Hamiltonian geometry of the disc model and the Cayley identification
//! with the half-plane.
//!
//! `ω_B = (1-|w|²)⁻² dx∧dy`. Hamiltonians satisfy `dH_γ = ω_B(·, X_γ)` and
//! the Poisson bracket is `{f, g} = ω_B(X_g, X_f)`, which makes
//! `γ ↦ H_γ` a Lie algebra homomorphism.

use num_complex::Complex64;

use super::group::{InfinitesimalIsometry, LieAlgebraElement};
use super::moebius::LieElement;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_disc(w: Complex64) -> Result<()> {
    if w.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::OutsideDisc(w))
    }
}

/// Density of `ω_B` with respect to `dx∧dy`.
pub fn area_density(w: Complex64) -> f64 {
    let d = 1.0 - w.norm_sqr();
    1.0 / (d * d)
}

/// `ω_B(u, v)` at `w` for tangent vectors written as complex numbers.
pub fn symplectic_form(w: Complex64, u: Complex64, v: Complex64) -> f64 {
    area_density(w) * (u.re * v.im - u.im * v.re)
}

/// `θ_B = (x dy - y dx) / (2(1-|w|²))`, a primitive of `ω_B`.
pub fn primitive(w: Complex64, v: Complex64) -> f64 {
    (w.re * v.im - w.im * v.re) / (2.0 * (1.0 - w.norm_sqr()))
}

pub fn hamiltonian_disc(gen: &LieElement, w: Complex64) -> Result<f64> {
    gen.hamiltonian(w)
}

pub fn vector_field_disc(gen: &LieElement, w: Complex64) -> Complex64 {
    gen.vector_field(w)
}

/// `(∂H/∂x, ∂H/∂y)` of the disc Hamiltonian, in closed form.
pub fn hamiltonian_gradient(gen: &LieElement, w: Complex64) -> (f64, f64) {
    let (x, y) = (w.re, w.im);
    let (br, bi) = (gen.beta.re, gen.beta.im);
    let d = 1.0 - w.norm_sqr();
    let n = 0.5 * (1.0 + w.norm_sqr()) * gen.alpha - (br * y + bi * x);
    let nx = gen.alpha * x - bi;
    let ny = gen.alpha * y - br;
    ((nx * d + 2.0 * x * n) / (d * d), (ny * d + 2.0 * y * n) / (d * d))
}

/// `{f, g} = (f_y g_x - f_x g_y) / ρ` from gradients.
pub fn poisson_bracket(w: Complex64, df: (f64, f64), dg: (f64, f64)) -> f64 {
    (df.1 * dg.0 - df.0 * dg.1) / area_density(w)
}

/// `|{H_γ₁, H_γ₂}(w) - H_[γ₁,γ₂](w)|` with analytic gradients.
pub fn poisson_residual(g1: &LieElement, g2: &LieElement, w: Complex64) -> Result<f64> {
    check_disc(w)?;
    let lhs = poisson_bracket(w, hamiltonian_gradient(g1, w), hamiltonian_gradient(g2, w));
    let rhs = g1.bracket(g2).hamiltonian_unchecked(w);
    Ok((lhs - rhs).abs())
}

/// Same residual with central finite-difference gradients of step `h`.
pub fn poisson_residual_fd(g1: &LieElement, g2: &LieElement, w: Complex64, h: f64) -> Result<f64> {
    check_disc(w)?;
    let grad = |g: &LieElement| {
        let f = |z: Complex64| g.hamiltonian_unchecked(z);
        ((f(w + h) - f(w - h)) / (2.0 * h), (f(w + I * h) - f(w - I * h)) / (2.0 * h))
    };
    let lhs = poisson_bracket(w, grad(g1), grad(g2));
    let rhs = g1.bracket(g2).hamiltonian_unchecked(w);
    Ok((lhs - rhs).abs())
}

/// `w ↦ i(1+w)/(1-w)`, sending `0 ↦ i`, `1 ↦ ∞`, `-1 ↦ 0`.
pub fn cayley(w: Complex64) -> Result<Complex64> {
    check_disc(w)?;
    Ok(I * (1.0 + w) / (1.0 - w))
}

pub fn cayley_inverse(z: Complex64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::OutsideHalfPlane(z));
    }
    Ok((z - I) / (z + I))
}

/// Derivative of the Cayley map, `2i/(1-w)²`.
pub fn cayley_derivative(w: Complex64) -> Complex64 {
    2.0 * I / ((1.0 - w) * (1.0 - w))
}

/// Flow of `γ` by time `t` applied to `w`, used by finite-difference checks.
pub fn flow(gen: &LieElement, t: f64, w: Complex64) -> Complex64 {
    gen.exp(t).apply(w)
}

//! Connections with known transport, used as test oracles and by the
//! moduli constructors.

use std::f64::consts::PI;

use super::path::{Domain, PathConnection};
use crate::error::{Error, Result};
use crate::hyperbolic::{LieElement, MoebiusMap};

/// `β` such that `exp((0, β))` has `|tr| = τ`.
pub fn translation_length(tau: f64) -> Result<f64> {
    if !(tau > 2.0) {
        return Err(Error::InvalidArgument(format!("τ must exceed 2, got {tau}")));
    }
    Ok((tau / 2.0).acosh())
}

/// `Φ_t = R(2πt)·exp(tγ)` with `γ = (0, acosh(τ/2))`: a loop connection
/// `a_t = (π, 0) + Ad_{R(2πt)} γ` whose holonomy is `exp(γ)` and whose
/// natural lift has rotation number 1.
pub fn rotation_loop(tau: f64, n: usize) -> Result<PathConnection<MoebiusMap>> {
    let gamma = LieElement::real(0.0, translation_length(tau)?);
    let spin = LieElement::real(PI, 0.0);
    PathConnection::from_fn(Domain::Circle, n, |t| spin + MoebiusMap::rotation(2.0 * PI * t).adjoint(&gamma))
}

/// The rotation loop conjugated by `k`.
pub fn conjugated_rotation_loop(tau: f64, n: usize, k: &MoebiusMap) -> Result<PathConnection<MoebiusMap>> {
    Ok(rotation_loop(tau, n)?.conjugated(k))
}

/// `Φ_t = exp(f(t)γ₁)·exp(g(t)γ₂)` and its connection in closed form,
/// `a = f'γ₁ + g'·Ad_{exp(fγ₁)}γ₂`.
pub struct TwoFactorPath {
    pub g1: LieElement,
    pub g2: LieElement,
    pub f: fn(f64) -> f64,
    pub df: fn(f64) -> f64,
    pub g: fn(f64) -> f64,
    pub dg: fn(f64) -> f64,
}

impl TwoFactorPath {
    pub fn phi(&self, t: f64) -> MoebiusMap {
        self.g1.exp((self.f)(t)).compose(&self.g2.exp((self.g)(t)))
    }

    pub fn generator(&self, t: f64) -> LieElement {
        self.g1 * (self.df)(t) + self.g1.exp((self.f)(t)).adjoint(&self.g2) * (self.dg)(t)
    }

    pub fn connection(&self, domain: Domain, n: usize) -> Result<PathConnection<MoebiusMap>> {
        PathConnection::from_fn(domain, n, |t| self.generator(t))
    }
}

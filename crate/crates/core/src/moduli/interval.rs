//! Boundary data on intervals and loops: membership tests and constructors.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connections::lift::{holonomy, lifted_transport};
use crate::connections::manufactured::conjugated_rotation_loop;
use crate::connections::{Domain, PathConnection};
use crate::error::{Error, Result};
use crate::hyperbolic::{AffLieElement, AffMap, LieElement, LiftedPoint, MoebiusMap};

/// Distance of `x` to the complement of the open interval `(0, 2π)`,
/// negative outside.
pub fn window_margin(x: f64) -> f64 {
    x.min(TAU - x)
}

/// A triple `(A, λ₀, λ₁)` for the affine group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalDatumAff {
    pub connection: PathConnection<AffMap>,
    pub lambda0: f64,
    pub lambda1: f64,
}

impl IntervalDatumAff {
    /// `λ₀ - g⁻¹(λ₁)`, positive exactly on members.
    pub fn margin(&self) -> f64 {
        let g = self.connection.full_transport();
        self.lambda0 - g.apply_inverse(self.lambda1)
    }
}

/// `λ₀ > g⁻¹(λ₁)` for the transport `g` of `A`.
pub fn check_paff_interval(x: &IntervalDatumAff) -> bool {
    x.margin() > 0.0
}

/// A triple `(A, λ̃₀, λ̃₁)` for `PU(1,1)` with lifted boundary labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalDatumLifted {
    pub connection: PathConnection<MoebiusMap>,
    pub lambda0: LiftedPoint,
    pub lambda1: LiftedPoint,
}

impl IntervalDatumLifted {
    /// `λ̃₀ - g̃⁻¹(λ̃₁)` with the natural lift `g̃`.
    pub fn gap(&self) -> Result<f64> {
        if self.connection.domain() != Domain::Interval {
            return Err(Error::InvalidArgument("interval datum needs an interval connection".into()));
        }
        let lift = lifted_transport(&self.connection);
        Ok(self.lambda0.value() - lift.apply_inverse(self.lambda1).value())
    }

    pub fn margin(&self) -> Result<f64> {
        Ok(window_margin(self.gap()?))
    }
}

/// `λ̃₀ - g̃⁻¹(λ̃₁) ∈ (0, 2π)`.
pub fn check_p_interval(x: &IntervalDatumLifted) -> Result<bool> {
    Ok(x.margin()? > 0.0)
}

/// A loop connection and the trace it should have.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopDatum {
    pub connection: PathConnection<MoebiusMap>,
    pub tau: f64,
}

/// Holonomy hyperbolic with `||tr| - τ| < tol` and natural lift of
/// rotation number 1. Non-hyperbolic holonomy is a non-member; a rotation
/// number that cannot be rounded is an error.
pub fn check_ptau_circle(x: &LoopDatum, tol: f64) -> Result<bool> {
    if !(x.tau > 2.0) {
        return Err(Error::InvalidArgument(format!("τ must exceed 2, got {}", x.tau)));
    }
    let h = match holonomy(&x.connection) {
        Ok(h) => h,
        Err(Error::NotHyperbolic(_)) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok((h.trace_abs() - x.tau).abs() < tol && h.rotation_number() == 1)
}

/// Random smooth bump `exp(sin(πt)·γ)` that is the identity at both ends.
fn random_bump(rng: &mut ChaCha8Rng) -> LieElement {
    LieElement::new(rng.gen_range(-1.0..1.0), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// A member with the given labels, obtained by gauge-transforming the
/// trivial datum `(0, 1, 0)` by a seeded random path.
pub fn construct_interval_datum(lambda0: f64, lambda1: f64, seed: u64, n: usize) -> Result<IntervalDatumAff> {
    if !lambda0.is_finite() || !lambda1.is_finite() {
        return Err(Error::InvalidArgument("labels must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bump = AffLieElement::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    // Φ_t(x) = exp(sin(πt)·bump)(x) + shift(t), with Φ₀(1) = λ₀ and Φ₁(0) = λ₁
    let phi = |t: f64| {
        let shift = (1.0 - t) * (lambda0 - 1.0) + t * lambda1;
        AffMap::new(1.0, shift).expect("finite shift").compose(&bump.exp((PI * t).sin()))
    };
    let connection = PathConnection::from_gauge_fn(Domain::Interval, n, phi)?;
    Ok(IntervalDatumAff { connection, lambda0, lambda1 })
}

/// A lifted member with the given labels: the trivial datum
/// `(0, λ̃₀, λ̃₀ - π)` gauge-transformed by `Φ_t = R(θt)·exp(sin(πt)·γ)`,
/// where `θ = λ̃₁ - λ̃₀ + π`. Every pair of finite labels is reachable.
pub fn construct_lifted_interval_datum(
    lambda0: LiftedPoint,
    lambda1: LiftedPoint,
    seed: u64,
    n: usize,
) -> Result<IntervalDatumLifted> {
    if !lambda0.value().is_finite() || !lambda1.value().is_finite() {
        return Err(Error::InvalidArgument("labels must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bump = random_bump(&mut rng);
    let theta = lambda1.value() - lambda0.value() + PI;
    let phi = |t: f64| MoebiusMap::rotation(theta * t).compose(&bump.exp((PI * t).sin()));
    let connection = PathConnection::from_gauge_fn(Domain::Interval, n, phi)?;
    Ok(IntervalDatumLifted { connection, lambda0, lambda1 })
}

/// A random element of `PU(1,1)` with translation part bounded by `reach`.
pub fn random_element(rng: &mut ChaCha8Rng, reach: f64) -> MoebiusMap {
    let r = reach * rng.gen::<f64>();
    let p = Complex64::from_polar(r.tanh(), rng.gen_range(0.0..TAU));
    MoebiusMap::translation_to(p).expect("tanh < 1").compose(&MoebiusMap::rotation(rng.gen_range(0.0..TAU)))
}

/// A member of `P_τ(S¹)`: the rotation loop conjugated by a seeded element.
pub fn construct_ptau_loop(tau: f64, seed: u64, n: usize) -> Result<LoopDatum> {
    construct_ptau_loop_within(tau, seed, n, 1.5)
}

/// As [`construct_ptau_loop`], with the conjugating element at most `reach`
/// away from a rotation.
pub fn construct_ptau_loop_within(tau: f64, seed: u64, n: usize, reach: f64) -> Result<LoopDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = random_element(&mut rng, reach);
    Ok(LoopDatum { connection: conjugated_rotation_loop(tau, n, &k)?, tau })
}

//! The affine group of the line acting on the half-plane `W`, and its
//! Lie algebra. `AffMap` is the matrix `[[scale, shift], [0, 1]]`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::group::{InfinitesimalIsometry, IsometryGroup, LieAlgebraElement};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffMap {
    scale: f64,
    shift: f64,
}

impl AffMap {
    pub fn new(scale: f64, shift: f64) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidArgument(format!("affine map needs finite scale > 0, got ({scale}, {shift})")));
        }
        Ok(Self { scale, shift })
    }

    pub fn identity() -> Self {
        Self { scale: 1.0, shift: 0.0 }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn compose(&self, h: &AffMap) -> AffMap {
        AffMap { scale: self.scale * h.scale, shift: self.scale * h.shift + self.shift }
    }

    pub fn inverse(&self) -> AffMap {
        AffMap { scale: 1.0 / self.scale, shift: -self.shift / self.scale }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    pub fn apply_inverse(&self, x: f64) -> f64 {
        (x - self.shift) / self.scale
    }

    pub fn act_halfplane(&self, w: Complex64) -> Result<Complex64> {
        if !(w.im > 0.0) {
            return Err(Error::OutsideHalfPlane(w));
        }
        Ok(self.scale * w + self.shift)
    }
}

/// Generator `[[scale_rate, shift_rate], [0, 0]]`, inducing `X = scale_rate·w + shift_rate`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffLieElement {
    pub scale_rate: f64,
    pub shift_rate: f64,
}

impl AffLieElement {
    pub fn new(scale_rate: f64, shift_rate: f64) -> Self {
        Self { scale_rate, shift_rate }
    }

    pub fn exp(&self, t: f64) -> AffMap {
        let st = self.scale_rate * t;
        // (e^{σt} - 1)/σ without cancellation
        let factor = if st.abs() < 1e-300 { t } else { st.exp_m1() / self.scale_rate };
        AffMap { scale: st.exp(), shift: self.shift_rate * factor }
    }

    pub fn vector_field(&self, w: Complex64) -> Complex64 {
        self.scale_rate * w + self.shift_rate
    }
}

/// `θ_W(X_γ)` with `θ_W = d re(w) / im(w)`.
pub fn hamiltonian_halfplane(gen: &AffLieElement, w: Complex64) -> Result<f64> {
    if !(w.im > 0.0) {
        return Err(Error::OutsideHalfPlane(w));
    }
    Ok(gen.hamiltonian_unchecked(w))
}

impl InfinitesimalIsometry for AffLieElement {
    fn field(&self, w: Complex64) -> Complex64 {
        self.vector_field(w)
    }

    fn field_derivative(&self, _w: Complex64) -> Complex64 {
        Complex64::new(self.scale_rate, 0.0)
    }

    fn hamiltonian_unchecked(&self, w: Complex64) -> f64 {
        (self.scale_rate * w.re + self.shift_rate) / w.im
    }
}

impl Add for AffLieElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.scale_rate + rhs.scale_rate, self.shift_rate + rhs.shift_rate)
    }
}

impl Sub for AffLieElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.scale_rate - rhs.scale_rate, self.shift_rate - rhs.shift_rate)
    }
}

impl Neg for AffLieElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.scale_rate, -self.shift_rate)
    }
}

impl Mul<f64> for AffLieElement {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.scale_rate * rhs, self.shift_rate * rhs)
    }
}

impl LieAlgebraElement for AffLieElement {
    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    fn bracket(&self, other: &Self) -> Self {
        Self::new(0.0, self.scale_rate * other.shift_rate - other.scale_rate * self.shift_rate)
    }

    fn norm(&self) -> f64 {
        self.scale_rate.hypot(self.shift_rate)
    }
}

impl IsometryGroup for AffMap {
    type Algebra = AffLieElement;

    fn identity() -> Self {
        AffMap::identity()
    }

    fn compose(&self, other: &Self) -> Self {
        AffMap::compose(self, other)
    }

    fn inverse(&self) -> Self {
        AffMap::inverse(self)
    }

    fn exp(generator: &AffLieElement, t: f64) -> Self {
        generator.exp(t)
    }

    fn adjoint(&self, gen: &AffLieElement) -> AffLieElement {
        AffLieElement::new(gen.scale_rate, self.scale * gen.shift_rate - gen.scale_rate * self.shift)
    }

    fn distance(&self, other: &Self) -> f64 {
        (self.scale - other.scale).hypot(self.shift - other.shift)
    }

    fn log_derivative(stencil: &[(f64, Self)], cur: &Self) -> AffLieElement {
        let ds: f64 = stencil.iter().map(|(w, g)| w * g.scale).sum();
        let dc: f64 = stencil.iter().map(|(w, g)| w * g.shift).sum();
        AffLieElement::new(ds / cur.scale, dc - cur.shift * ds / cur.scale)
    }

    fn act(&self, w: Complex64) -> Complex64 {
        self.scale * w + self.shift
    }
}

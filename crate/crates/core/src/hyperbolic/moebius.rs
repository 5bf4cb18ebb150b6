//! `PU(1,1)` acting on the unit disc, and its Lie algebra `su(1,1)`.
//!
//! A group element is the class of `[[a, b], [b̄, ā]]` with `|a|² - |b|² = 1`
//! modulo `±1`; it acts by `w ↦ (aw + b)/(b̄w + ā)`.
//!
//! A Lie algebra element `(α, β)` is the generator
//! `[[iα, β̄], [β, -iα]]`. With this embedding the one-parameter group
//! `exp(tγ)` moves points of the disc along
//! `X_γ = (-βw² + 2iαw + β̄) ∂_w`, and that field is generated by
//! `H_γ = ((1+|w|²)α/2 - im(βw)) / (1-|w|²)`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::BoundaryPoint;
use super::group::{InfinitesimalIsometry, IsometryGroup, LieAlgebraElement};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default tolerance for [`MoebiusMap::classify`].
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Product of two matrices of the shape `[[x, y], [ȳ, x̄]]`, in `(x, y)` coordinates.
#[inline]
fn mul_pair(x1: Complex64, y1: Complex64, x2: Complex64, y2: Complex64) -> (Complex64, Complex64) {
    (x1 * x2 + y1 * y2.conj(), x1 * y2 + y1 * x2.conj())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
}

impl MoebiusMap {
    /// Validates `|a|² - |b|² = 1` within `1e-8` before normalizing.
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if !det.is_finite() || (det - 1.0).abs() > 1e-8 * (a.norm_sqr() + b.norm_sqr()).max(1.0) {
            return Err(Error::InvalidArgument(format!("|a|^2 - |b|^2 = {det}, expected 1")));
        }
        Ok(Self::normalized(a, b))
    }

    /// Rescales to unit determinant and picks the canonical sign.
    /// Panics if `|a|² - |b|² <= 0`.
    pub fn normalized(a: Complex64, b: Complex64) -> Self {
        let det = a.norm_sqr() - b.norm_sqr();
        assert!(det > 0.0, "degenerate PU(1,1) representative (det = {det})");
        let s = det.sqrt();
        let (mut a, mut b) = (a / s, b / s);
        if a.re < 0.0 || (a.re == 0.0 && a.im < 0.0) {
            a = -a;
            b = -b;
        }
        Self { a, b }
    }

    pub fn identity() -> Self {
        Self { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) }
    }

    /// `H(s)`: translation by `s` along the real axis towards `+1`.
    pub fn translation(s: f64) -> Self {
        Self::normalized(Complex64::new(s.cosh(), 0.0), Complex64::new(s.sinh(), 0.0))
    }

    /// Rotation of the disc by `angle` (`w ↦ e^{i·angle} w`).
    pub fn rotation(angle: f64) -> Self {
        Self::normalized(Complex64::from_polar(1.0, angle / 2.0), Complex64::new(0.0, 0.0))
    }

    /// The unique element mapping `0 ↦ p` and fixing the direction at `p`
    /// (a pure translation), `w ↦ (w + p)/(1 + p̄w)`.
    pub fn translation_to(p: Complex64) -> Result<Self> {
        if p.norm_sqr() >= 1.0 {
            return Err(Error::OutsideDisc(p));
        }
        Ok(Self::normalized(Complex64::new(1.0, 0.0), p))
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn compose(&self, h: &MoebiusMap) -> MoebiusMap {
        let (a, b) = mul_pair(self.a, self.b, h.a, h.b);
        Self::normalized(a, b)
    }

    pub fn inverse(&self) -> MoebiusMap {
        Self::normalized(self.a.conj(), -self.b)
    }

    /// Möbius formula without a domain check; valid on the closed disc.
    pub fn apply(&self, w: Complex64) -> Complex64 {
        (self.a * w + self.b) / (self.b.conj() * w + self.a.conj())
    }

    pub fn act_disc(&self, w: Complex64) -> Result<Complex64> {
        if !(w.norm_sqr() < 1.0) {
            return Err(Error::OutsideDisc(w));
        }
        Ok(self.apply(w))
    }

    pub fn act_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let image = self.apply(p.to_complex());
        debug_assert!((image.norm() - 1.0).abs() < 1e-12 * (self.a.norm_sqr() + self.b.norm_sqr()), "{image}");
        BoundaryPoint::from_complex(image)
    }

    /// Signed trace `2 re(a)` of the canonical representative.
    pub fn trace(&self) -> f64 {
        2.0 * self.a.re
    }

    /// Frobenius distance of matrix representatives after sign alignment.
    pub fn distance(&self, other: &MoebiusMap) -> f64 {
        let plus = (self.a - other.a).norm_sqr() + (self.b - other.b).norm_sqr();
        let minus = (self.a + other.a).norm_sqr() + (self.b + other.b).norm_sqr();
        (2.0 * plus.min(minus)).sqrt()
    }

    /// Representative `(a, b)` or `(-a, -b)` closest to `reference`.
    pub fn aligned_with(&self, reference: &MoebiusMap) -> (Complex64, Complex64) {
        let plus = (self.a - reference.a).norm_sqr() + (self.b - reference.b).norm_sqr();
        let minus = (self.a + reference.a).norm_sqr() + (self.b + reference.b).norm_sqr();
        if plus <= minus {
            (self.a, self.b)
        } else {
            (-self.a, -self.b)
        }
    }

    pub fn classify(&self, tol: f64) -> IsometryClass {
        if self.distance(&Self::identity()) < tol {
            return IsometryClass::Identity;
        }
        let t = self.trace().abs();
        if t > 2.0 + tol {
            IsometryClass::Hyperbolic
        } else if t < 2.0 - tol {
            IsometryClass::Elliptic
        } else {
            IsometryClass::Parabolic
        }
    }

    /// Boundary fixed points `(l_small, l_big)` of a hyperbolic element,
    /// labelled by the eigenvalue of modulus `< 1` and `> 1` respectively.
    pub fn fixed_points(&self) -> Result<(BoundaryPoint, BoundaryPoint)> {
        let class = self.classify(CLASSIFY_TOL);
        if class != IsometryClass::Hyperbolic {
            return Err(Error::NotHyperbolic(class));
        }
        // canonical sign gives re(a) > 1
        let half = self.a.re;
        let big = half + (half * half - 1.0).sqrt();
        let small = 1.0 / big;
        Ok((self.eigen_direction(small), self.eigen_direction(big)))
    }

    fn eigen_direction(&self, lambda: f64) -> BoundaryPoint {
        // (a - λ) z1 + b z2 = 0  or  b̄ z1 + (ā - λ) z2 = 0, with w = z1/z2
        let d1 = self.a - lambda;
        let d2 = self.b.conj();
        let w = if d1.norm() >= d2.norm() { -self.b / d1 } else { -(self.a.conj() - lambda) / d2 };
        BoundaryPoint::from_complex(w)
    }

    /// `g γ g⁻¹`.
    pub fn adjoint(&self, gen: &LieElement) -> LieElement {
        let (gx, gy) = gen.matrix();
        let (x, y) = mul_pair(self.a, self.b, gx, gy);
        let (x, y) = mul_pair(x, y, self.a.conj(), -self.b);
        LieElement::from_matrix(x, y)
    }
}

/// Element `(α, β)` of `su(1,1)`, generator `[[iα, β̄], [β, -iα]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieElement {
    pub alpha: f64,
    pub beta: Complex64,
}

impl LieElement {
    pub fn new(alpha: f64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn real(alpha: f64, beta: f64) -> Self {
        Self::new(alpha, Complex64::new(beta, 0.0))
    }

    /// Matrix in `(x, y)` coordinates of `[[x, y], [ȳ, x̄]]`.
    pub fn matrix(&self) -> (Complex64, Complex64) {
        (I * self.alpha, self.beta.conj())
    }

    /// Reads a traceless matrix `[[x, y], [ȳ, x̄]]` with `re(x) = 0`.
    pub fn from_matrix(x: Complex64, y: Complex64) -> Self {
        Self::new(x.im, y.conj())
    }

    pub fn exp(&self, t: f64) -> MoebiusMap {
        // M² = (|β|² - α²) 1
        let delta = self.beta.norm_sqr() - self.alpha * self.alpha;
        let x = delta * t * t;
        let (c, s) = if x.abs() < 1e-8 {
            (1.0 + x / 2.0, t * (1.0 + x / 6.0))
        } else if delta > 0.0 {
            let k = delta.sqrt();
            ((k * t).cosh(), (k * t).sinh() / k)
        } else {
            let k = (-delta).sqrt();
            ((k * t).cos(), (k * t).sin() / k)
        };
        let (mx, my) = self.matrix();
        MoebiusMap::normalized(Complex64::new(c, 0.0) + mx * s, my * s)
    }

    /// Determinant of the generator, `α² - |β|²`; positive for elliptic
    /// one-parameter groups, negative for hyperbolic ones.
    pub fn determinant(&self) -> f64 {
        self.alpha * self.alpha - self.beta.norm_sqr()
    }

    /// Induced vector field `X_γ(w) = -βw² + 2iαw + β̄`.
    pub fn vector_field(&self, w: Complex64) -> Complex64 {
        -self.beta * w * w + I * (2.0 * self.alpha) * w + self.beta.conj()
    }

    /// `H_γ(w)`, with a domain check.
    pub fn hamiltonian(&self, w: Complex64) -> Result<f64> {
        if !(w.norm_sqr() < 1.0) {
            return Err(Error::OutsideDisc(w));
        }
        Ok(self.hamiltonian_unchecked(w))
    }
}

impl InfinitesimalIsometry for LieElement {
    fn field(&self, w: Complex64) -> Complex64 {
        self.vector_field(w)
    }

    fn field_derivative(&self, w: Complex64) -> Complex64 {
        -2.0 * self.beta * w + I * (2.0 * self.alpha)
    }

    fn hamiltonian_unchecked(&self, w: Complex64) -> f64 {
        let r2 = w.norm_sqr();
        (0.5 * (1.0 + r2) * self.alpha - (self.beta * w).im) / (1.0 - r2)
    }
}

impl Add for LieElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.alpha + rhs.alpha, self.beta + rhs.beta)
    }
}

impl Sub for LieElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.alpha - rhs.alpha, self.beta - rhs.beta)
    }
}

impl Neg for LieElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.alpha, -self.beta)
    }
}

impl Mul<f64> for LieElement {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self::new(self.alpha * rhs, self.beta * rhs)
    }
}

impl LieAlgebraElement for LieElement {
    fn zero() -> Self {
        Self::new(0.0, Complex64::new(0.0, 0.0))
    }

    fn bracket(&self, other: &Self) -> Self {
        let (x1, y1) = self.matrix();
        let (x2, y2) = other.matrix();
        let (px, py) = mul_pair(x1, y1, x2, y2);
        let (qx, qy) = mul_pair(x2, y2, x1, y1);
        Self::from_matrix(px - qx, py - qy)
    }

    fn norm(&self) -> f64 {
        (self.alpha * self.alpha + self.beta.norm_sqr()).sqrt()
    }
}

impl IsometryGroup for MoebiusMap {
    type Algebra = LieElement;

    fn identity() -> Self {
        MoebiusMap::identity()
    }

    fn compose(&self, other: &Self) -> Self {
        MoebiusMap::compose(self, other)
    }

    fn inverse(&self) -> Self {
        MoebiusMap::inverse(self)
    }

    fn exp(generator: &LieElement, t: f64) -> Self {
        generator.exp(t)
    }

    fn adjoint(&self, generator: &LieElement) -> LieElement {
        MoebiusMap::adjoint(self, generator)
    }

    fn distance(&self, other: &Self) -> f64 {
        MoebiusMap::distance(self, other)
    }

    fn log_derivative(stencil: &[(f64, Self)], cur: &Self) -> LieElement {
        let (mut da, mut db) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for (w, g) in stencil {
            let (a, b) = g.aligned_with(cur);
            da += a * *w;
            db += b * *w;
        }
        let (x, y) = mul_pair(da, db, cur.a.conj(), -cur.b);
        LieElement::from_matrix(x, y)
    }

    fn act(&self, w: Complex64) -> Complex64 {
        self.apply(w)
    }
}

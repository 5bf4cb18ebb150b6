//! Geodesic germs: rays in the disc that end at a boundary point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{wrap_to_pi, BoundaryPoint};
use super::moebius::{LieElement, MoebiusMap};
use crate::error::{Error, Result};

/// A geodesic ray from `anchor` to `endpoint`. Distances along the ray are
/// measured in the metric `|dw| / (1-|w|²)`, so the point at distance `d`
/// from the anchor is `T_p(tanh(d)·u)` with `T_p(w) = (w+p)/(1+p̄w)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicGerm {
    endpoint: BoundaryPoint,
    anchor: Complex64,
}

impl GeodesicGerm {
    pub fn new(endpoint: BoundaryPoint, anchor: Complex64) -> Result<Self> {
        if !(anchor.norm_sqr() < 1.0) {
            return Err(Error::OutsideDisc(anchor));
        }
        Ok(Self { endpoint, anchor })
    }

    /// The ray towards `endpoint` on the geodesic from `opposite`, anchored
    /// at the point of that geodesic closest to the origin.
    pub fn from_endpoints(endpoint: BoundaryPoint, opposite: BoundaryPoint) -> Result<Self> {
        let delta = wrap_to_pi(endpoint.angle() - opposite.angle());
        if delta.abs() < 1e-12 {
            return Err(Error::InvalidArgument("geodesic endpoints coincide".into()));
        }
        let half = 0.5 * delta.abs();
        let dir = Complex64::from_polar(1.0, opposite.angle() + 0.5 * delta);
        let anchor = dir * ((1.0 - half.sin()) / half.cos());
        Self::new(endpoint, anchor)
    }

    /// The ray along the radius from the origin.
    pub fn radial(endpoint: BoundaryPoint) -> Self {
        Self { endpoint, anchor: Complex64::new(0.0, 0.0) }
    }

    pub fn endpoint(&self) -> BoundaryPoint {
        self.endpoint
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    fn frame(&self) -> MoebiusMap {
        MoebiusMap::normalized(Complex64::new(1.0, 0.0), self.anchor)
    }

    /// Unit direction of the ray after moving the anchor to the origin.
    fn direction(&self) -> Complex64 {
        let e = self.endpoint.to_complex();
        let v = (e - self.anchor) / (1.0 - self.anchor.conj() * e);
        v / v.norm()
    }

    /// Point at signed distance `d` (negative values continue the geodesic
    /// backwards past the anchor).
    pub fn point_at(&self, d: f64) -> Complex64 {
        self.frame().apply(self.direction() * d.tanh())
    }

    /// `∂/∂d` of [`point_at`](Self::point_at).
    pub fn tangent_at(&self, d: f64) -> Complex64 {
        let z = self.direction() * d.tanh();
        let p = self.anchor;
        let denom = 1.0 + p.conj() * z;
        let jac = (1.0 - p.norm_sqr()) / (denom * denom);
        jac * self.direction() / (d.cosh() * d.cosh())
    }

    /// Signed distance parameter of the orthogonal projection of `w` onto
    /// the full geodesic, in the anchor-centred frame.
    pub fn parameter_of(&self, w: Complex64) -> f64 {
        let z = self.frame().inverse().apply(w);
        let r = (z * self.direction().conj()).re.clamp(-1.0 + 1e-16, 1.0 - 1e-16);
        r.atanh()
    }

    /// The other point at infinity of the full geodesic.
    pub fn opposite_endpoint(&self) -> BoundaryPoint {
        BoundaryPoint::from_complex(self.frame().apply(-self.direction()))
    }

    pub fn transformed(&self, g: &MoebiusMap) -> GeodesicGerm {
        GeodesicGerm { endpoint: g.act_boundary(self.endpoint), anchor: g.apply(self.anchor) }
    }

    /// Generator of hyperbolic translation along the geodesic, pointing
    /// towards the endpoint with unit speed at the anchor.
    pub fn tangent_generator(&self) -> LieElement {
        let dir = self.direction();
        let k = self.frame().compose(&MoebiusMap::rotation(dir.arg()));
        k.adjoint(&LieElement::real(0.0, 1.0))
    }

    /// A generator whose flow moves the endpoint at angular speed
    /// `endpoint_rate` and the opposite endpoint at `opposite_rate`; this is
    /// the least-norm solution among all such generators, which differ by
    /// multiples of [`tangent_generator`](Self::tangent_generator).
    pub fn transporting_generator(&self, endpoint_rate: f64, opposite_rate: f64) -> LieElement {
        // on the circle θ' = 2(α - br sin θ - bi cos θ)
        let rows = [self.endpoint.angle(), self.opposite_endpoint().angle()].map(|t| [2.0, -2.0 * t.sin(), -2.0 * t.cos()]);
        let rhs = [endpoint_rate, opposite_rate];
        let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let (m00, m01, m11) = (dot(&rows[0], &rows[0]), dot(&rows[0], &rows[1]), dot(&rows[1], &rows[1]));
        let det = m00 * m11 - m01 * m01;
        let y0 = (m11 * rhs[0] - m01 * rhs[1]) / det;
        let y1 = (m00 * rhs[1] - m01 * rhs[0]) / det;
        let x: Vec<f64> = (0..3).map(|k| rows[0][k] * y0 + rows[1][k] * y1).collect();
        LieElement::new(x[0], Complex64::new(x[1], x[2]))
    }
}

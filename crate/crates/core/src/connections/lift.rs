//! Natural lifts to the universal cover of `∂∞B = ℝ/2πℤ`.
//!
//! A path `Φ_t` in `PU(1,1)` from the identity determines a lift `g̃` of its
//! endpoint acting on `ℝ`: follow `Φ_t(λ)` continuously, starting at `λ̃`.

use serde::{Deserialize, Serialize};

use super::path::{Domain, PathConnection};
use crate::error::{Error, Result};
use crate::hyperbolic::{wrap_to_pi, BoundaryPoint, LiftedPoint, MoebiusMap};

/// Largest boundary displacement allowed between consecutive path samples.
const MAX_STEP: f64 = 1.0;

/// Tolerance for rounding a rotation number to an integer.
pub const ROTATION_ROUNDING_TOL: f64 = 0.05;

/// A sampled path from the identity, representing an element of the
/// universal cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedTransport {
    path: Vec<MoebiusMap>,
}

impl LiftedTransport {
    /// The path must start at the identity and move boundary points by less
    /// than one radian between samples.
    pub fn from_path(path: Vec<MoebiusMap>) -> Result<Self> {
        if path.is_empty() || path[0].distance(&MoebiusMap::identity()) > 1e-9 {
            return Err(Error::InvalidArgument("lift path must start at the identity".into()));
        }
        for w in path.windows(2) {
            let step = Self::max_boundary_step(&w[0], &w[1]);
            if step > MAX_STEP {
                return Err(Error::LiftDiscontinuity { step });
            }
        }
        Ok(Self { path })
    }

    pub fn identity() -> Self {
        Self { path: vec![MoebiusMap::identity()] }
    }

    /// Natural lift of the transport of `a` over its whole domain. Cells are
    /// subdivided so that boundary points never move by more than half a
    /// radian per step.
    pub fn of_connection(a: &PathConnection<MoebiusMap>) -> Self {
        let h = a.spacing();
        let speed = a.samples().iter().map(|g| 2.0 * (g.alpha.abs() + g.beta.norm())).fold(0.0, f64::max);
        let substeps = ((speed * h / 0.5).ceil() as usize).max(1);
        let (_, path) = a.transport_path(0.0, 1.0, substeps).expect("full range is valid");
        Self { path }
    }

    /// Largest boundary displacement of `h g⁻¹`, probed at sixteen points.
    /// This bounds how far any tracked image moves from `g` to `h`.
    fn max_boundary_step(g: &MoebiusMap, h: &MoebiusMap) -> f64 {
        let r = h.compose(&g.inverse());
        (0..16)
            .map(|k| {
                let p = BoundaryPoint::new(k as f64 * std::f64::consts::FRAC_PI_8);
                wrap_to_pi(r.act_boundary(p).angle() - p.angle()).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn element(&self) -> MoebiusMap {
        *self.path.last().expect("path is never empty")
    }

    pub fn path(&self) -> &[MoebiusMap] {
        &self.path
    }

    /// Continuous trajectory of `x` under the path.
    pub fn trace(&self, x: LiftedPoint) -> Vec<f64> {
        let p = x.project();
        let mut theta = x.value();
        let mut prev = p.angle();
        let mut out = Vec::with_capacity(self.path.len());
        out.push(theta);
        for g in &self.path[1..] {
            let next = g.act_boundary(p).angle();
            theta += wrap_to_pi(next - prev);
            prev = next;
            out.push(theta);
        }
        out
    }

    /// `g̃(x)`.
    pub fn apply(&self, x: LiftedPoint) -> LiftedPoint {
        LiftedPoint(*self.trace(x).last().expect("trace is never empty"))
    }

    /// `g̃⁻¹(x)`. The pointwise inverse of the path gives the right point of
    /// the circle, but its steps can be large where the path contracts
    /// strongly, so the sheet is fixed against the forward lift.
    pub fn apply_inverse(&self, x: LiftedPoint) -> LiftedPoint {
        let y = self.inverse().apply(x).value();
        let turns = ((self.apply(LiftedPoint(y)).value() - x.value()) / std::f64::consts::TAU).round();
        LiftedPoint(y - turns * std::f64::consts::TAU)
    }

    pub fn inverse(&self) -> Self {
        Self { path: self.path.iter().map(|g| g.inverse()).collect() }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let head = other.element();
        let mut path = other.path.clone();
        path.extend(self.path[1..].iter().map(|g| g.compose(&head)));
        Self { path }
    }

    /// `k g̃ k⁻¹` for `k` in the image of the lift of a path from the identity.
    pub fn conjugated(&self, k: &MoebiusMap) -> Self {
        let ki = k.inverse();
        Self { path: self.path.iter().map(|g| k.compose(g).compose(&ki)).collect() }
    }
}

/// Holonomy of a loop together with its natural lift and rotation number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedHolonomy {
    element: MoebiusMap,
    rotation_number: i64,
    tracked: BoundaryPoint,
    lift_trace: Vec<f64>,
    lift: LiftedTransport,
}

impl LiftedHolonomy {
    /// The endpoint must be hyperbolic. The rotation number is read off at
    /// the fixed point `l_small`, where the shift is an exact multiple of 2π.
    pub fn from_lift(lift: LiftedTransport) -> Result<Self> {
        let element = lift.element();
        let (tracked, _) = element.fixed_points()?;
        let lift_trace = lift.trace(LiftedPoint(tracked.angle()));
        let turns = (lift_trace.last().expect("non-empty") - lift_trace[0]) / std::f64::consts::TAU;
        let rounded = turns.round();
        if (turns - rounded).abs() > ROTATION_ROUNDING_TOL {
            return Err(Error::RotationRounding { value: turns, tol: ROTATION_ROUNDING_TOL });
        }
        Ok(Self { element, rotation_number: rounded as i64, tracked, lift_trace, lift })
    }

    pub fn element(&self) -> MoebiusMap {
        self.element
    }

    pub fn rotation_number(&self) -> i64 {
        self.rotation_number
    }

    /// The tracked fixed point, `l_small` of the holonomy.
    pub fn tracked_point(&self) -> BoundaryPoint {
        self.tracked
    }

    pub fn lift_trace(&self) -> &[f64] {
        &self.lift_trace
    }

    pub fn lift(&self) -> &LiftedTransport {
        &self.lift
    }

    pub fn trace_abs(&self) -> f64 {
        self.element.trace().abs()
    }

    pub fn apply(&self, x: LiftedPoint) -> LiftedPoint {
        self.lift.apply(x)
    }

    pub fn apply_inverse(&self, x: LiftedPoint) -> LiftedPoint {
        self.lift.apply_inverse(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::from_lift(self.lift.inverse())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::from_lift(self.lift.compose(&other.lift))
    }
}

/// Holonomy around a circle connection.
pub fn holonomy(a: &PathConnection<MoebiusMap>) -> Result<LiftedHolonomy> {
    if a.domain() != Domain::Circle {
        return Err(Error::InvalidArgument("holonomy needs a circle connection".into()));
    }
    LiftedHolonomy::from_lift(LiftedTransport::of_connection(a))
}

/// `g̃(l̃) - l̃`.
pub fn lifted_shift(h: &LiftedHolonomy, l: LiftedPoint) -> f64 {
    h.apply(l).value() - l.value()
}

/// Natural lift of an interval connection's transport.
pub fn lifted_transport(a: &PathConnection<MoebiusMap>) -> LiftedTransport {
    LiftedTransport::of_connection(a)
}

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Point of the circle at infinity `∂∞B = ℝ/2πℤ`, stored as an angle in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        Self { angle: normalize_angle(angle) }
    }

    pub fn from_complex(w: Complex64) -> Self {
        Self::new(w.arg())
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    /// Lift to `ℝ` lying in `[base, base + 2π)`.
    pub fn lift_near(&self, base: f64) -> LiftedPoint {
        LiftedPoint(base + normalize_angle(self.angle - base))
    }

    /// Lift to `ℝ` closest to `base`, within `(base - π, base + π]`.
    pub fn nearest_lift(&self, base: f64) -> LiftedPoint {
        LiftedPoint(base + wrap_to_pi(self.angle - base))
    }

    /// Length of the positively oriented arc from `self` to `other`, in `[0, 2π)`.
    pub fn ccw_distance_to(&self, other: &BoundaryPoint) -> f64 {
        normalize_angle(other.angle - self.angle)
    }

    /// Whether `self` lies in the open arc running counterclockwise from
    /// `start` to `end`.
    pub fn in_open_arc(&self, start: &BoundaryPoint, end: &BoundaryPoint) -> bool {
        let offset = start.ccw_distance_to(self);
        let length = start.ccw_distance_to(end);
        offset > 0.0 && offset < length
    }

    /// Angular distance on the circle, in `[0, π]`.
    pub fn circle_distance(&self, other: &BoundaryPoint) -> f64 {
        let d = self.ccw_distance_to(other);
        d.min(TAU - d)
    }
}

/// Point of the universal cover `ℝ → ℝ/2πℤ`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LiftedPoint(pub f64);

impl LiftedPoint {
    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn project(&self) -> BoundaryPoint {
        BoundaryPoint::new(self.0)
    }

    /// Deck transformation by `k` full turns.
    pub fn deck(&self, k: i64) -> LiftedPoint {
        LiftedPoint(self.0 + TAU * k as f64)
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can return exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle difference to `(-π, π]`.
pub fn wrap_to_pi(delta: f64) -> f64 {
    let r = normalize_angle(delta);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

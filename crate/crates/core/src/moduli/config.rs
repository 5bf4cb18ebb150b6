//! Label configurations for discs with boundary punctures, with and
//! without an interior puncture.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::interval::window_margin;
use crate::connections::manufactured::translation_length;
use crate::connections::{LiftedHolonomy, LiftedTransport};
use crate::error::{Error, Result};
use crate::hyperbolic::{BoundaryPoint, LieElement, LiftedPoint, MoebiusMap};

/// Default tolerance for `||tr| - τ|`.
pub const TRACE_TOL: f64 = 1e-6;

fn strictly_descending(labels: &[f64]) -> bool {
    labels.windows(2).all(|w| w[0] > w[1])
}

/// `λ†₀ > ⋯ > λ†_d`.
pub fn check_c_aff(labels: &[f64]) -> Result<bool> {
    if labels.len() < 2 {
        return Err(Error::InvalidArgument("need at least two labels".into()));
    }
    Ok(strictly_descending(labels))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscBoundaryConfig {
    pub labels: Vec<LiftedPoint>,
}

impl DiscBoundaryConfig {
    fn values(&self) -> Vec<f64> {
        self.labels.iter().map(|l| l.value()).collect()
    }

    /// Smallest distance to the boundary of any of the open conditions.
    pub fn margin(&self) -> f64 {
        let v = self.values();
        let order = v.windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
        order.min(window_margin(v[0] - v[v.len() - 1]))
    }
}

/// Strictly descending with `λ̃†₀ - λ̃†_d ∈ (0, 2π)`.
pub fn check_c(config: &DiscBoundaryConfig) -> Result<bool> {
    if config.labels.len() < 2 {
        return Err(Error::InvalidArgument("need at least two labels".into()));
    }
    Ok(config.margin() > 0.0)
}

/// Data `(g̃†, λ̃†₀, …, λ̃†_d)` at the base point of a disc with an interior
/// puncture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuncturedConfig {
    pub holonomy: LiftedHolonomy,
    pub labels: Vec<LiftedPoint>,
    pub tau: f64,
}

/// Outcome of both formulations of the membership conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CTauReport {
    /// Conditions stated with windows on consecutive labels.
    pub windowed: bool,
    /// Conditions stated with the eigenvector interval and descending order.
    pub eigen_interval: bool,
    /// Distance to the boundary of the open conditions, from the windowed
    /// form; negative when a condition fails.
    pub margin: f64,
}

impl PuncturedConfig {
    fn values(&self) -> Vec<f64> {
        self.labels.iter().map(|l| l.value()).collect()
    }

    fn holonomy_ok(&self, tol: f64) -> bool {
        self.holonomy.rotation_number() == 1 && (self.holonomy.trace_abs() - self.tau).abs() < tol
    }

    /// `λ̃†₀ - (g̃†)⁻¹(λ̃†_d)`.
    pub fn closing_gap(&self) -> f64 {
        let v = self.values();
        v[0] - self.holonomy.apply_inverse(LiftedPoint(v[v.len() - 1])).value()
    }

    /// Evaluates both formulations without comparing them.
    pub fn evaluate(&self, tol: f64) -> Result<CTauReport> {
        if self.labels.is_empty() {
            return Err(Error::InvalidArgument("need at least one label".into()));
        }
        let v = self.values();
        let hol = self.holonomy_ok(tol);
        let closing = window_margin(self.closing_gap());
        let consecutive = v.windows(2).map(|w| window_margin(w[0] - w[1])).fold(f64::INFINITY, f64::min);
        let margin = closing.min(consecutive);
        let windowed = hol && margin > 0.0;

        let (small, big) = self.holonomy.element().fixed_points()?;
        let in_interval = LiftedPoint(v[0]).project().in_open_arc(&big, &small);
        let eigen_interval = hol && in_interval && closing > 0.0 && strictly_descending(&v);
        Ok(CTauReport { windowed, eigen_interval, margin: if hol { margin } else { f64::NEG_INFINITY } })
    }
}

/// Membership in `C_τ(d+1; 1)`. The two equivalent formulations are both
/// evaluated; disagreement means a lift was computed inaccurately and is
/// reported as an error.
pub fn check_c_tau(config: &PuncturedConfig) -> Result<bool> {
    check_c_tau_with(config, TRACE_TOL)
}

pub fn check_c_tau_with(config: &PuncturedConfig, tol: f64) -> Result<bool> {
    let r = config.evaluate(tol)?;
    if r.windowed != r.eigen_interval {
        return Err(Error::Inconsistent(format!(
            "windowed form gives {}, eigenvector form gives {} (margin {:e})",
            r.windowed, r.eigen_interval, r.margin
        )));
    }
    Ok(r.windowed)
}

/// Hyperbolic translation towards `i` moving `1` to the angle `π/2 - φ`.
fn vertical_translation(phi: f64) -> MoebiusMap {
    let s = -(phi / 2.0).tan().ln() / 2.0;
    let q = MoebiusMap::rotation(PI / 2.0);
    q.compose(&MoebiusMap::translation(s)).compose(&q.inverse())
}

/// An element mapping the boundary points `0 ↦ l_big`, `π ↦ l_small`.
pub fn frame_for_fixed_points(l_big: f64, l_small: f64) -> Result<MoebiusMap> {
    let len = (l_small - l_big).rem_euclid(TAU);
    if !(len > 0.0) {
        return Err(Error::InvalidArgument("fixed points must be distinct".into()));
    }
    let phi = len / 2.0;
    Ok(MoebiusMap::rotation(l_big - PI / 2.0 + phi).compose(&vertical_translation(phi)))
}

/// Lifted hyperbolic element with `|tr| = τ`, rotation number 1 and the
/// given fixed points, as the lift of `t ↦ k R(2πt) exp(tγ) k⁻¹`.
pub fn rotation_one_element(tau: f64, l_small: f64, l_big: f64) -> Result<LiftedHolonomy> {
    let gamma = LieElement::real(0.0, translation_length(tau)?);
    let k = frame_for_fixed_points(l_big, l_small)?;
    let ki = k.inverse();
    let mut n = 256;
    loop {
        let path = (0..=n)
            .map(|j| {
                let t = j as f64 / n as f64;
                k.compose(&MoebiusMap::rotation(TAU * t)).compose(&gamma.exp(t)).compose(&ki)
            })
            .collect();
        match LiftedTransport::from_path(path) {
            Ok(lift) => return LiftedHolonomy::from_lift(lift),
            Err(Error::LiftDiscontinuity { .. }) if n < 1 << 20 => n *= 4,
            Err(e) => return Err(e),
        }
    }
}

/// The five-step construction: pick `λ̃†₀`; pick fixed points with `λ̃†₀`
/// over `(l_big, l_small)`; take the rotation-one element with those fixed
/// points; put `λ̃†_d` at the midpoint of its admissible interval; space the
/// remaining labels evenly in between.
pub fn construct_c_tau_point(d: usize, tau: f64, seed: u64) -> Result<PuncturedConfig> {
    translation_length(tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda0 = rng.gen_range(-10.0..10.0);
    let len = rng.gen_range(0.5 * PI..1.5 * PI);
    let l_big = lambda0 - rng.gen_range(0.2..0.8) * len;
    let l_small = l_big + len;
    let holonomy = rotation_one_element(tau, l_small, l_big)?;
    let mut labels = vec![LiftedPoint(lambda0)];
    if d > 0 {
        // admissible: g̃(λ̃₀) - 2π < λ̃_d < λ̃₀
        let lo = holonomy.apply(LiftedPoint(lambda0)).value() - TAU;
        let last = 0.5 * (lo + lambda0);
        for j in 1..=d {
            labels.push(LiftedPoint(lambda0 - j as f64 * (lambda0 - last) / d as f64));
        }
    }
    Ok(PuncturedConfig { holonomy, labels, tau })
}

/// Components of the preimage of `(l_big, l_small)` are
/// `(b + 2πk, b + 2πk + len)` with `b ∈ [0, 2π)` the angle of `l_big`.
fn component_of(x: f64, big: &BoundaryPoint, small: &BoundaryPoint) -> Option<i64> {
    let b = big.angle();
    let len = big.ccw_distance_to(small);
    let k = ((x - b) / TAU).floor();
    let offset = x - b - k * TAU;
    (offset > 0.0 && offset < len).then_some(k as i64)
}

/// Index of the component containing `λ̃†₀`, counted from the component
/// containing `anchor` (default: the one starting in `[0, 2π)`).
pub fn sheet_index(config: &PuncturedConfig, anchor: Option<LiftedPoint>) -> Result<i64> {
    if !check_c_tau(config)? {
        return Err(Error::Precondition("configuration is not in C_τ".into()));
    }
    let (small, big) = config.holonomy.element().fixed_points()?;
    let k = component_of(config.labels[0].value(), &big, &small)
        .ok_or_else(|| Error::Precondition("leading label is not over (l_big, l_small)".into()))?;
    let base = match anchor {
        None => 0,
        Some(a) => component_of(a.value(), &big, &small)
            .ok_or_else(|| Error::Precondition("anchor is not over (l_big, l_small)".into()))?,
    };
    Ok(k - base)
}

/// All labels moved by the deck transformation `x ↦ x + 2πk`.
pub fn deck_shift(config: &PuncturedConfig, k: i64) -> PuncturedConfig {
    PuncturedConfig {
        holonomy: config.holonomy.clone(),
        labels: config.labels.iter().map(|l| l.deck(k)).collect(),
        tau: config.tau,
    }
}

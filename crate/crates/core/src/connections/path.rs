//! Sampled one-forms `A = a_t dt` on an interval or a circle, and their
//! parallel transport `dΦ/dt = a_t Φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{IsometryGroup, LieAlgebraElement};

pub const DEFAULT_NODES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// `[0, 1]` with nodes `k/(N-1)`.
    Interval,
    /// `ℝ/ℤ` with nodes `k/N`.
    Circle,
}

/// Piecewise-linear `g`-valued one-form on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "G::Algebra: Serialize", deserialize = "G::Algebra: Deserialize<'de>"))]
pub struct PathConnection<G: IsometryGroup> {
    domain: Domain,
    samples: Vec<G::Algebra>,
}

impl<G: IsometryGroup> PathConnection<G> {
    pub fn new(domain: Domain, samples: Vec<G::Algebra>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Shape(format!("need at least 2 samples, got {}", samples.len())));
        }
        Ok(Self { domain, samples })
    }

    pub fn from_fn(domain: Domain, n: usize, f: impl Fn(f64) -> G::Algebra) -> Result<Self> {
        let tmp = Self::new(domain, vec![G::Algebra::zero(); n.max(2)])?;
        let samples = (0..n).map(|k| f(tmp.node(k))).collect();
        Self::new(domain, samples)
    }

    pub fn constant(domain: Domain, n: usize, gen: G::Algebra) -> Result<Self> {
        Self::new(domain, vec![gen; n])
    }

    pub fn zero(domain: Domain, n: usize) -> Result<Self> {
        Self::constant(domain, n, G::Algebra::zero())
    }

    /// Connection `(dΦ)Φ⁻¹` of a smooth path, with the derivative taken by a
    /// centered difference of step `1e-5` at each node.
    pub fn from_gauge_fn(domain: Domain, n: usize, phi: impl Fn(f64) -> G) -> Result<Self> {
        let h = 1e-5;
        Self::from_fn(domain, n, |t| G::centered_log_derivative(&phi(t - h), &phi(t + h), &phi(t), 2.0 * h))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[G::Algebra] {
        &self.samples
    }

    /// Grid spacing.
    pub fn spacing(&self) -> f64 {
        match self.domain {
            Domain::Interval => 1.0 / (self.samples.len() - 1) as f64,
            Domain::Circle => 1.0 / self.samples.len() as f64,
        }
    }

    pub fn node(&self, k: usize) -> f64 {
        k as f64 * self.spacing()
    }

    /// Linear interpolation; circle connections are evaluated periodically.
    pub fn value_at(&self, t: f64) -> G::Algebra {
        let n = self.samples.len();
        let x = match self.domain {
            Domain::Interval => t.clamp(0.0, 1.0) / self.spacing(),
            Domain::Circle => t.rem_euclid(1.0) / self.spacing(),
        };
        let k = (x.floor() as usize).min(n - 1);
        let frac = x - k as f64;
        let next = match self.domain {
            Domain::Interval => (k + 1).min(n - 1),
            Domain::Circle => (k + 1) % n,
        };
        self.samples[k] * (1.0 - frac) + self.samples[next] * frac
    }

    /// Same path traversed backwards, `a'(t) = -a(1-t)`.
    pub fn reversed(&self) -> Self {
        let samples = match self.domain {
            Domain::Interval => self.samples.iter().rev().map(|a| -*a).collect(),
            Domain::Circle => {
                let n = self.samples.len();
                (0..n).map(|k| -self.samples[(n - k) % n]).collect()
            }
        };
        Self { domain: self.domain, samples }
    }

    /// Pointwise `g a g⁻¹`.
    pub fn conjugated(&self, g: &G) -> Self {
        Self { domain: self.domain, samples: self.samples.iter().map(|a| g.adjoint(a)).collect() }
    }

    /// Breakpoints of `[t0, t1]`: the endpoints and every node in between.
    fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        let h = self.spacing();
        let mut pts = vec![t0];
        let mut k = (t0 / h).floor() as i64 + 1;
        loop {
            let t = k as f64 * h;
            if t >= t1 {
                break;
            }
            if t > t0 {
                pts.push(t);
            }
            k += 1;
        }
        if t1 > t0 {
            pts.push(t1);
        }
        pts
    }

    fn check_range(&self, t0: f64, t1: f64) -> Result<()> {
        let ok = match self.domain {
            Domain::Interval => 0.0 <= t0 && t0 <= t1 && t1 <= 1.0,
            Domain::Circle => t0.is_finite() && t1.is_finite() && t0 <= t1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid transport range [{t0}, {t1}]")))
        }
    }

    /// Group elements along `[t0, t1]` from the midpoint product-of-exponentials
    /// scheme, with each cell split into `substeps` pieces. The first entry is
    /// the identity, the last is the transport map.
    pub fn transport_path(&self, t0: f64, t1: f64, substeps: usize) -> Result<(Vec<f64>, Vec<G>)> {
        self.check_range(t0, t1)?;
        let substeps = substeps.max(1);
        let pts = self.breakpoints(t0, t1);
        let mut times = vec![t0];
        let mut path = vec![G::identity()];
        let mut phi = G::identity();
        for w in pts.windows(2) {
            let h = (w[1] - w[0]) / substeps as f64;
            for j in 0..substeps {
                let a = w[0] + j as f64 * h;
                let mid = self.value_at(a + 0.5 * h);
                phi = G::exp(&mid, h).compose(&phi);
                times.push(a + h);
                path.push(phi);
            }
        }
        Ok((times, path))
    }

    pub fn transport(&self, t0: f64, t1: f64) -> Result<G> {
        self.check_range(t0, t1)?;
        let mut phi = G::identity();
        for w in self.breakpoints(t0, t1).windows(2) {
            let h = w[1] - w[0];
            phi = G::exp(&self.value_at(w[0] + 0.5 * h), h).compose(&phi);
        }
        Ok(phi)
    }

    /// Transport with a doubled-resolution Richardson estimate of its error.
    pub fn transport_with_estimate(&self, t0: f64, t1: f64) -> Result<(G, f64)> {
        let coarse = self.transport(t0, t1)?;
        let (_, fine) = self.transport_path(t0, t1, 2)?;
        let fine = *fine.last().expect("path is never empty");
        Ok((fine, coarse.distance(&fine) / 3.0))
    }

    /// Transport over the full interval, or once around the circle.
    pub fn full_transport(&self) -> G {
        self.transport(0.0, 1.0).expect("full range is valid")
    }

    /// Transport maps `Φ_{t_k}` from `0` to every node; on the circle the
    /// list ends with the holonomy at `t = 1`.
    pub fn gauge_path(&self) -> GaugePath<G> {
        let (_, path) = self.transport_path(0.0, 1.0, 1).expect("full range is valid");
        GaugePath { domain: Domain::Interval, samples: path }
    }
}

/// Group-valued samples at the nodes of a [`PathConnection`] domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugePath<G> {
    domain: Domain,
    samples: Vec<G>,
}

impl<G: IsometryGroup> GaugePath<G> {
    /// On the circle, samples are periodic and the endpoint is not repeated.
    pub fn new(domain: Domain, samples: Vec<G>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::Shape(format!("need at least 4 gauge samples, got {}", samples.len())));
        }
        Ok(Self { domain, samples })
    }

    pub fn from_fn(domain: Domain, n: usize, f: impl Fn(f64) -> G) -> Result<Self> {
        let h = match domain {
            Domain::Interval => 1.0 / (n.max(2) - 1) as f64,
            Domain::Circle => 1.0 / n.max(1) as f64,
        };
        Self::new(domain, (0..n).map(|k| f(k as f64 * h)).collect())
    }

    pub fn constant(domain: Domain, n: usize, g: G) -> Result<Self> {
        Self::new(domain, vec![g; n])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn samples(&self) -> &[G] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> G {
        self.samples[0]
    }

    /// `Φ(1)`; for a loop gauge this is `Φ(0)`.
    pub fn last(&self) -> G {
        match self.domain {
            Domain::Interval => *self.samples.last().expect("non-empty"),
            Domain::Circle => self.samples[0],
        }
    }

    fn spacing(&self) -> f64 {
        match self.domain {
            Domain::Interval => 1.0 / (self.samples.len() - 1) as f64,
            Domain::Circle => 1.0 / self.samples.len() as f64,
        }
    }

    /// `(dΦ)Φ⁻¹` at node `k`: centered differences in the interior or around
    /// the circle, third-order one-sided differences at interval ends.
    pub fn log_derivative_at(&self, k: usize) -> G::Algebra {
        let n = self.samples.len();
        let h = self.spacing();
        let s = &self.samples;
        match self.domain {
            Domain::Circle => G::centered_log_derivative(&s[(k + n - 1) % n], &s[(k + 1) % n], &s[k], 2.0 * h),
            Domain::Interval if k == 0 => G::log_derivative(&one_sided(h, [s[0], s[1], s[2], s[3]]), &s[0]),
            Domain::Interval if k == n - 1 => {
                G::log_derivative(&one_sided(-h, [s[n - 1], s[n - 2], s[n - 3], s[n - 4]]), &s[n - 1])
            }
            Domain::Interval => G::centered_log_derivative(&s[k - 1], &s[k + 1], &s[k], 2.0 * h),
        }
    }

    pub fn inverse(&self) -> Self {
        Self { domain: self.domain, samples: self.samples.iter().map(|g| g.inverse()).collect() }
    }
}

/// Four-point one-sided derivative stencil; `h < 0` looks backwards.
fn one_sided<G: Copy>(h: f64, g: [G; 4]) -> [(f64, G); 4] {
    let w = [-11.0, 18.0, -9.0, 2.0];
    [0, 1, 2, 3].map(|i| (w[i] / (6.0 * h), g[i]))
}

/// `Φ_*A = ΦAΦ⁻¹ + (dΦ)Φ⁻¹`, evaluated node by node.
pub fn gauge_transform<G: IsometryGroup>(phi: &GaugePath<G>, a: &PathConnection<G>) -> Result<PathConnection<G>> {
    if phi.domain() != a.domain() || phi.len() != a.len() {
        return Err(Error::Shape(format!(
            "gauge path ({:?}, {}) does not match connection ({:?}, {})",
            phi.domain(),
            phi.len(),
            a.domain(),
            a.len()
        )));
    }
    let samples = (0..a.len()).map(|k| phi.samples()[k].adjoint(&a.samples()[k]) + phi.log_derivative_at(k)).collect();
    PathConnection::new(a.domain(), samples)
}

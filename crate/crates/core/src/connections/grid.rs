//! Gauge fields on a rectangular grid and the lattice connections they
//! induce.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hyperbolic::disc::{hamiltonian_gradient, poisson_bracket};
use crate::hyperbolic::{InfinitesimalIsometry, IsometryGroup, LieElement, MoebiusMap};

/// A connection `A = a_s ds + a_t dt` on `[0, ls] × [0, lt]`, sampled at the
/// nodes of a uniform grid, optionally with a gauge field `Φ` such that
/// `A = (dΦ)Φ⁻¹`.
#[derive(Clone, Debug)]
pub struct GaugeGrid {
    ns: usize,
    nt: usize,
    hs: f64,
    ht: f64,
    phi: Option<Vec<MoebiusMap>>,
    a_s: Vec<LieElement>,
    a_t: Vec<LieElement>,
}

impl GaugeGrid {
    fn check_shape(ns: usize, nt: usize) -> Result<()> {
        if ns < 2 || nt < 2 {
            return Err(Error::Shape(format!("grid needs at least 2×2 nodes, got {ns}×{nt}")));
        }
        Ok(())
    }

    /// Samples `Φ` at `ns × nt` nodes and differentiates it numerically.
    pub fn from_gauge(ns: usize, nt: usize, ls: f64, lt: f64, phi: impl Fn(f64, f64) -> MoebiusMap) -> Result<Self> {
        Self::check_shape(ns.min(3), nt.min(3))?;
        if ns < 3 || nt < 3 {
            return Err(Error::Shape("a gauge grid needs at least 3×3 nodes".into()));
        }
        let hs = ls / (ns - 1) as f64;
        let ht = lt / (nt - 1) as f64;
        let g: Vec<MoebiusMap> = (0..ns * nt).map(|k| phi((k / nt) as f64 * hs, (k % nt) as f64 * ht)).collect();
        let at = |i: usize, j: usize| g[i * nt + j];
        let deriv = |prev: MoebiusMap, cur: MoebiusMap, next: MoebiusMap, h: f64, lo: bool, hi: bool| {
            if lo {
                MoebiusMap::log_derivative(&[(-1.5 / h, cur), (2.0 / h, next), (-0.5 / h, prev)], &cur)
            } else if hi {
                MoebiusMap::log_derivative(&[(1.5 / h, cur), (-2.0 / h, prev), (0.5 / h, next)], &cur)
            } else {
                MoebiusMap::centered_log_derivative(&prev, &next, &cur, 2.0 * h)
            }
        };
        let mut a_s = Vec::with_capacity(ns * nt);
        let mut a_t = Vec::with_capacity(ns * nt);
        for i in 0..ns {
            for j in 0..nt {
                // at an edge, "prev"/"next" carry the second and first neighbours
                let ds = if i == 0 {
                    deriv(at(2, j), at(0, j), at(1, j), hs, true, false)
                } else if i == ns - 1 {
                    deriv(at(ns - 2, j), at(ns - 1, j), at(ns - 3, j), hs, false, true)
                } else {
                    deriv(at(i - 1, j), at(i, j), at(i + 1, j), hs, false, false)
                };
                let dt = if j == 0 {
                    deriv(at(i, 2), at(i, 0), at(i, 1), ht, true, false)
                } else if j == nt - 1 {
                    deriv(at(i, nt - 2), at(i, nt - 1), at(i, nt - 3), ht, false, true)
                } else {
                    deriv(at(i, j - 1), at(i, j), at(i, j + 1), ht, false, false)
                };
                a_s.push(ds);
                a_t.push(dt);
            }
        }
        Ok(Self { ns, nt, hs, ht, phi: Some(g), a_s, a_t })
    }

    /// Samples a connection given in closed form.
    pub fn from_connection(
        ns: usize,
        nt: usize,
        ls: f64,
        lt: f64,
        a: impl Fn(f64, f64) -> (LieElement, LieElement),
    ) -> Result<Self> {
        Self::check_shape(ns, nt)?;
        let hs = ls / (ns - 1) as f64;
        let ht = lt / (nt - 1) as f64;
        let (a_s, a_t) = (0..ns * nt).map(|k| a((k / nt) as f64 * hs, (k % nt) as f64 * ht)).unzip();
        Ok(Self { ns, nt, hs, ht, phi: None, a_s, a_t })
    }

    /// The constant connection `γ₁ ds + γ₂ dt`.
    pub fn constant(ns: usize, nt: usize, ls: f64, lt: f64, g1: LieElement, g2: LieElement) -> Result<Self> {
        Self::from_connection(ns, nt, ls, lt, |_, _| (g1, g2))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.ns, self.nt)
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.hs, self.ht)
    }

    pub fn gauge(&self, i: usize, j: usize) -> Option<MoebiusMap> {
        self.phi.as_ref().map(|g| g[i * self.nt + j])
    }

    pub fn connection(&self, i: usize, j: usize) -> (LieElement, LieElement) {
        let k = i * self.nt + j;
        (self.a_s[k], self.a_t[k])
    }

    fn link_s(&self, i: usize, j: usize) -> MoebiusMap {
        let (a, _) = self.connection(i, j);
        let (b, _) = self.connection(i + 1, j);
        ((a + b) * 0.5).exp(self.hs)
    }

    fn link_t(&self, i: usize, j: usize) -> MoebiusMap {
        let (_, a) = self.connection(i, j);
        let (_, b) = self.connection(i, j + 1);
        ((a + b) * 0.5).exp(self.ht)
    }

    /// Holonomy around the plaquette with lower-left corner `(i, j)`,
    /// traversed counterclockwise.
    pub fn plaquette(&self, i: usize, j: usize) -> MoebiusMap {
        let right = self.link_s(i, j);
        let up = self.link_t(i + 1, j);
        let left = self.link_s(i, j + 1).inverse();
        let down = self.link_t(i, j).inverse();
        down.compose(&left).compose(&up).compose(&right)
    }

    /// `max distance(plaquette, 1) / (hs·ht)` over all plaquettes.
    pub fn plaquette_curvature(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.ns - 1 {
            for j in 0..self.nt - 1 {
                worst = worst.max(self.plaquette(i, j).distance(&MoebiusMap::identity()));
            }
        }
        worst / (self.hs * self.ht)
    }

    /// `∂_t H_{a_s} - ∂_s H_{a_t} + {H_{a_s}, H_{a_t}}` at an interior node
    /// and a point `w` of the disc, with centered grid differences.
    pub fn flatness_residual(&self, i: usize, j: usize, w: Complex64) -> Result<f64> {
        if i == 0 || j == 0 || i + 1 >= self.ns || j + 1 >= self.nt {
            return Err(Error::InvalidArgument(format!("node ({i}, {j}) is not interior")));
        }
        if !(w.norm_sqr() < 1.0) {
            return Err(Error::OutsideDisc(w));
        }
        let hs_at = |i: usize, j: usize| self.connection(i, j).0.hamiltonian_unchecked(w);
        let ht_at = |i: usize, j: usize| self.connection(i, j).1.hamiltonian_unchecked(w);
        let dt_hs = (hs_at(i, j + 1) - hs_at(i, j - 1)) / (2.0 * self.ht);
        let ds_ht = (ht_at(i + 1, j) - ht_at(i - 1, j)) / (2.0 * self.hs);
        let (a, b) = self.connection(i, j);
        let pb = poisson_bracket(w, hamiltonian_gradient(&a, w), hamiltonian_gradient(&b, w));
        Ok((dt_hs - ds_ht + pb).abs())
    }
}

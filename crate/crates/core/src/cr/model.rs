//! Target models, maps sampled on a mesh, and connections on a mesh.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use crate::connections::{GaugeGrid, PathConnection};
use crate::error::{Error, Result};
use crate::hyperbolic::{AffLieElement, AffMap, GeodesicGerm, IsometryGroup, LieAlgebraElement, LieElement, MoebiusMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    HalfPlane,
    Disc,
}

/// One of the two models of the hyperbolic plane together with its
/// structure group. Norms are `|v| / m(w)` with the conformal denominator
/// `m`, and `θ` is the invariant primitive of the area form.
pub trait TargetModel: Copy + Send + Sync + 'static {
    type Group: IsometryGroup<Algebra = Self::Algebra>;
    type Algebra: LieAlgebraElement;
    const TAG: ModelTag;

    fn denominator(w: Complex64) -> f64;
    fn contains(w: Complex64) -> bool;
    fn theta(w: Complex64, dw: Complex64) -> f64;
    /// Generator moving a germ's endpoint and opposite endpoint at the given
    /// angular rates. Only the disc model carries germ conditions.
    fn germ_generator(germ: &GeodesicGerm, endpoint_rate: f64, opposite_rate: f64) -> Option<Self::Algebra>;
}

#[derive(Clone, Copy, Debug)]
pub struct HalfPlane;

#[derive(Clone, Copy, Debug)]
pub struct Disc;

impl TargetModel for HalfPlane {
    type Group = AffMap;
    type Algebra = AffLieElement;
    const TAG: ModelTag = ModelTag::HalfPlane;

    fn denominator(w: Complex64) -> f64 {
        w.im
    }

    fn contains(w: Complex64) -> bool {
        w.im > 0.0
    }

    /// `θ_W = dx / y`.
    fn theta(w: Complex64, dw: Complex64) -> f64 {
        dw.re / w.im
    }

    fn germ_generator(_: &GeodesicGerm, _: f64, _: f64) -> Option<AffLieElement> {
        None
    }
}

impl TargetModel for Disc {
    type Group = MoebiusMap;
    type Algebra = LieElement;
    const TAG: ModelTag = ModelTag::Disc;

    fn denominator(w: Complex64) -> f64 {
        1.0 - w.norm_sqr()
    }

    fn contains(w: Complex64) -> bool {
        w.norm_sqr() < 1.0
    }

    fn theta(w: Complex64, dw: Complex64) -> f64 {
        crate::hyperbolic::disc::primitive(w, dw)
    }

    fn germ_generator(germ: &GeodesicGerm, endpoint_rate: f64, opposite_rate: f64) -> Option<LieElement> {
        Some(germ.transporting_generator(endpoint_rate, opposite_rate))
    }
}

/// A map from the mesh nodes to the target model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMap {
    pub model: ModelTag,
    pub values: Vec<Complex64>,
}

impl GridMap {
    pub fn new(model: ModelTag, values: Vec<Complex64>) -> Self {
        Self { model, values }
    }

    pub fn from_fn<M: TargetModel>(mesh: &Mesh, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::new(M::TAG, mesh.nodes().iter().map(|n| f(n.z)).collect())
    }

    pub fn constant<M: TargetModel>(mesh: &Mesh, w: Complex64) -> Self {
        Self::new(M::TAG, vec![w; mesh.len()])
    }

    pub fn check<M: TargetModel>(&self, mesh: &Mesh) -> Result<()> {
        if self.model != M::TAG {
            return Err(Error::Precondition(format!("map is in the {:?} model, expected {:?}", self.model, M::TAG)));
        }
        if self.values.len() != mesh.len() {
            return Err(Error::Shape(format!("map has {} values for {} nodes", self.values.len(), mesh.len())));
        }
        if let Some(w) = self.values.iter().find(|w| !M::contains(**w) || !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::Precondition(format!("map value {w} is outside the {:?} model", M::TAG)));
        }
        Ok(())
    }

    /// Largest nodewise distance `|u - v|` in the ambient plane.
    pub fn sup_distance(&self, other: &GridMap) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// A connection `A = a_x dx + a_y dy` sampled at the mesh nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GridConnection<A> {
    pub ax: Vec<A>,
    pub ay: Vec<A>,
}

impl<A: LieAlgebraElement> GridConnection<A> {
    pub fn zero(mesh: &Mesh) -> Self {
        Self { ax: vec![A::zero(); mesh.len()], ay: vec![A::zero(); mesh.len()] }
    }

    pub fn from_fn(mesh: &Mesh, f: impl Fn(Complex64) -> (A, A)) -> Self {
        let (ax, ay) = mesh.nodes().iter().map(|n| f(n.z)).unzip();
        Self { ax, ay }
    }

    /// `A = (dΦ)Φ⁻¹` for a smooth gauge `Φ`, differentiated by fourth-order
    /// central differences with step `1e-3`.
    pub fn from_gauge<G>(mesh: &Mesh, phi: impl Fn(Complex64) -> G) -> Self
    where
        G: IsometryGroup<Algebra = A>,
    {
        const H: f64 = 1e-3;
        let deriv = |z: Complex64, dir: Complex64| {
            let s = [(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)];
            let stencil: Vec<(f64, G)> = s.iter().map(|&(k, w)| (w / H, phi(z + dir * (k * H)))).collect();
            G::log_derivative(&stencil, &phi(z))
        };
        Self::from_fn(mesh, |z| (deriv(z, Complex64::new(1.0, 0.0)), deriv(z, Complex64::new(0.0, 1.0))))
    }

    /// Pullback of a path connection along the second coordinate:
    /// `A = a(t) dt`.
    pub fn pullback_t<G>(mesh: &Mesh, a: &PathConnection<G>) -> Self
    where
        G: IsometryGroup<Algebra = A>,
    {
        Self::from_fn(mesh, |z| (A::zero(), a.value_at(z.im)))
    }

    pub fn len(&self) -> usize {
        self.ax.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ax.is_empty()
    }

    pub fn check(&self, mesh: &Mesh) -> Result<()> {
        if self.ax.len() != mesh.len() || self.ay.len() != mesh.len() {
            return Err(Error::Shape(format!("connection has {} samples for {} nodes", self.ax.len(), mesh.len())));
        }
        Ok(())
    }

    /// Average over the given nodes.
    pub fn mean(&self, nodes: &[usize]) -> (A, A) {
        let w = 1.0 / nodes.len() as f64;
        nodes.iter().fold((A::zero(), A::zero()), |(x, y), &k| (x + self.ax[k] * w, y + self.ay[k] * w))
    }
}

impl GridConnection<LieElement> {
    /// Reads a [`GaugeGrid`] on a rectangle mesh with matching node layout.
    pub fn from_gauge_grid(mesh: &Mesh, grid: &GaugeGrid) -> Result<Self> {
        let (ns, nt) = grid.shape();
        let (hs, ht) = grid.spacing();
        let (ms, mt) = mesh.spacing();
        let matches = mesh.len() == ns * nt && (hs - ms).abs() < 1e-12 && (ht - mt).abs() < 1e-12;
        let nodes = mesh.nodes();
        if !matches || nodes.iter().any(|n| n.i < 0 || n.j < 0 || n.i as usize >= ns || n.j as usize >= nt) {
            return Err(Error::Shape("gauge grid does not match the mesh".into()));
        }
        let (ax, ay) = nodes.iter().map(|n| grid.connection(n.i as usize, n.j as usize)).unzip();
        Ok(Self { ax, ay })
    }
}

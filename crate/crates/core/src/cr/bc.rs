//! Boundary conditions as per-node constraints.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mesh::Mesh;
use super::model::ModelTag;
use crate::error::{Error, Result};
use crate::hyperbolic::GeodesicGerm;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeConstraint {
    /// `re w = λ` in the half-plane model.
    Line(f64),
    /// `w` on the geodesic carrying the germ, in the disc model.
    Germ(GeodesicGerm),
}

impl NodeConstraint {
    fn model(&self) -> ModelTag {
        match self {
            NodeConstraint::Line(_) => ModelTag::HalfPlane,
            NodeConstraint::Germ(_) => ModelTag::Disc,
        }
    }
}

/// Constraints keyed by node index. Nodes without an entry are free.
/// Pinned nodes take their prescribed value in the solver but keep their
/// constraint for the boundary energy.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCondition {
    pub constraints: BTreeMap<usize, NodeConstraint>,
    #[serde(default)]
    pub pins: BTreeMap<usize, Complex64>,
}

impl BoundaryCondition {
    pub fn free() -> Self {
        Self::default()
    }

    /// Vertical lines `re w = λ(z)` on the constrained boundary of the mesh.
    pub fn lines(mesh: &Mesh, lambda: impl Fn(Complex64) -> f64) -> Self {
        let constraints =
            mesh.constrained_boundary().iter().map(|&k| (k, NodeConstraint::Line(lambda(mesh.position(k))))).collect();
        Self { constraints, pins: BTreeMap::new() }
    }

    /// Geodesic germs on the constrained boundary of the mesh.
    pub fn germs(mesh: &Mesh, germ: impl Fn(Complex64) -> GeodesicGerm) -> Self {
        let constraints =
            mesh.constrained_boundary().iter().map(|&k| (k, NodeConstraint::Germ(germ(mesh.position(k))))).collect();
        Self { constraints, pins: BTreeMap::new() }
    }

    /// Prescribes the value at one node.
    pub fn pin(mut self, node: usize, w: Complex64) -> Self {
        self.pins.insert(node, w);
        self
    }

    pub fn pinned(&self, node: usize) -> Option<Complex64> {
        self.pins.get(&node).copied()
    }

    pub fn get(&self, node: usize) -> Option<&NodeConstraint> {
        self.constraints.get(&node)
    }

    pub fn check(&self, mesh: &Mesh, model: ModelTag) -> Result<()> {
        let nodes = self.constraints.keys().chain(self.pins.keys());
        if let Some(k) = nodes.into_iter().find(|&&k| k >= mesh.len()) {
            return Err(Error::Shape(format!("constraint on node {k}, mesh has {}", mesh.len())));
        }
        for (&k, c) in &self.constraints {
            if c.model() != model {
                return Err(Error::Precondition(format!("{c:?} is not a boundary condition in the {model:?} model")));
            }
            if let NodeConstraint::Line(l) = c {
                if !l.is_finite() {
                    return Err(Error::InvalidArgument(format!("non-finite boundary value on node {k}")));
                }
            }
        }
        if let Some((k, w)) = self.pins.iter().find(|(_, w)| !(w.re.is_finite() && w.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("non-finite pin {w} on node {k}")));
        }
        Ok(())
    }
}

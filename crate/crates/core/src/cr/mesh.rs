//! Structured quadrilateral meshes of the parameter domains.
//!
//! Every mesh is a subset of a uniform lattice `z = origin + i·hs + j·ht·i`;
//! the disc and half-disc grids keep exactly those lattice cells whose four
//! corners lie strictly inside the unit disc, so they are polygonal
//! approximations from the inside.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_RESOLUTION: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Shape {
    /// `[0, length] × [0, 1]`.
    Rectangle { length: f64 },
    /// `[0, length] × S¹` with `t` periodic of period 1.
    Cylinder { length: f64 },
    /// Unit disc; `(n_s, n_t)` cells per unit length along each axis.
    Disc,
    /// `{|z| < 1, re z ≥ 0}`.
    HalfDisc,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: Shape,
    pub resolution: (usize, usize),
}

impl DomainSpec {
    pub fn new(shape: Shape, ns: usize, nt: usize) -> Self {
        Self { shape, resolution: (ns, nt) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeshNode {
    pub i: i64,
    pub j: i64,
    pub z: Complex64,
}

/// Cells list their corners counterclockwise starting at the lower left:
/// `(i,j), (i+1,j), (i+1,j+1), (i,j+1)`.
#[derive(Clone, Debug)]
pub struct Mesh {
    spec: DomainSpec,
    hs: f64,
    ht: f64,
    nodes: Vec<MeshNode>,
    cells: Vec<[usize; 4]>,
    boundary_edges: Vec<(usize, usize)>,
    constrained: Vec<usize>,
}

impl Mesh {
    pub fn new(spec: DomainSpec) -> Result<Self> {
        let (ns, nt) = spec.resolution;
        if ns < MIN_RESOLUTION || nt < MIN_RESOLUTION {
            return Err(Error::Shape(format!("resolution must be at least {MIN_RESOLUTION}×{MIN_RESOLUTION}, got {ns}×{nt}")));
        }
        let (hs, ht, origin, range_i, range_j, period) = match spec.shape {
            Shape::Rectangle { length } | Shape::Cylinder { length } => {
                if !(length > 0.0) {
                    return Err(Error::InvalidArgument(format!("length must be positive, got {length}")));
                }
                let period = matches!(spec.shape, Shape::Cylinder { .. }).then_some(nt as i64);
                (length / ns as f64, 1.0 / nt as f64, Complex64::new(0.0, 0.0), (0, ns as i64), (0, nt as i64), period)
            }
            Shape::Disc => {
                (1.0 / ns as f64, 1.0 / nt as f64, Complex64::new(-1.0, -1.0), (0, 2 * ns as i64), (0, 2 * nt as i64), None)
            }
            Shape::HalfDisc => {
                (1.0 / ns as f64, 1.0 / nt as f64, Complex64::new(0.0, -1.0), (0, ns as i64), (0, 2 * nt as i64), None)
            }
        };
        let position = |i: i64, j: i64| origin + Complex64::new(i as f64 * hs, j as f64 * ht);
        let inside = |i: i64, j: i64| match spec.shape {
            Shape::Disc | Shape::HalfDisc => position(i, j).norm_sqr() < 1.0 - 1e-12,
            _ => true,
        };
        let wrap = |j: i64| match period {
            Some(p) => j.rem_euclid(p),
            None => j,
        };

        let mut index: HashMap<(i64, i64), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut node_id = |i: i64, j: i64, nodes: &mut Vec<MeshNode>| -> usize {
            let j = wrap(j);
            *index.entry((i, j)).or_insert_with(|| {
                nodes.push(MeshNode { i, j, z: position(i, j) });
                nodes.len() - 1
            })
        };
        let mut cells = Vec::new();
        for i in range_i.0..range_i.1 {
            for j in range_j.0..range_j.1 {
                let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
                if corners.iter().all(|&(a, b)| inside(a, b)) {
                    cells.push(corners.map(|(a, b)| node_id(a, b, &mut nodes)));
                }
            }
        }
        if cells.is_empty() {
            return Err(Error::Shape("mesh has no cells".into()));
        }

        let mut edge_count: HashMap<(usize, usize), (usize, (usize, usize))> = HashMap::new();
        for c in &cells {
            for k in 0..4 {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                let e = edge_count.entry((a.min(b), a.max(b))).or_insert((0, (a, b)));
                e.0 += 1;
            }
        }
        let mut boundary_edges: Vec<(usize, usize)> = edge_count.into_values().filter(|(n, _)| *n == 1).map(|(_, e)| e).collect();
        boundary_edges.sort_unstable();

        let constrained: Vec<usize> = match spec.shape {
            Shape::Rectangle { .. } => {
                let mut v: Vec<usize> = nodes
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| n.i == 0 || n.i == ns as i64 || n.j == 0 || n.j == nt as i64)
                    .map(|(k, _)| k)
                    .collect();
                v.sort_unstable();
                v
            }
            Shape::HalfDisc => nodes.iter().enumerate().filter(|(_, n)| n.i == 0).map(|(k, _)| k).collect(),
            Shape::Cylinder { .. } | Shape::Disc => Vec::new(),
        };

        Ok(Self { spec, hs, ht, nodes, cells, boundary_edges, constrained })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.hs, self.ht)
    }

    /// The larger of the two spacings.
    pub fn h(&self) -> f64 {
        self.hs.max(self.ht)
    }

    pub fn cell_area(&self) -> f64 {
        self.hs * self.ht
    }

    pub fn nodes(&self) -> &[MeshNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    pub fn position(&self, k: usize) -> Complex64 {
        self.nodes[k].z
    }

    /// Cell centre. For periodic meshes the corner positions are unwrapped
    /// first.
    pub fn cell_center(&self, c: usize) -> Complex64 {
        let n = &self.nodes[self.cells[c][0]];
        n.z + Complex64::new(0.5 * self.hs, 0.5 * self.ht)
    }

    /// Edges with exactly one adjacent cell, oriented so that the domain is
    /// on their left.
    pub fn boundary_edges(&self) -> &[(usize, usize)] {
        &self.boundary_edges
    }

    /// Nodes on the part of the boundary that carries a boundary condition:
    /// the whole perimeter of a rectangle and the diameter of a half-disc.
    /// Cylinder ends and the disc rim are free.
    pub fn constrained_boundary(&self) -> &[usize] {
        &self.constrained
    }

    /// Displacement from node `a` to node `b` of a common cell, correcting
    /// for the periodic seam.
    pub fn displacement(&self, a: usize, b: usize) -> Complex64 {
        let (na, nb) = (&self.nodes[a], &self.nodes[b]);
        let mut dj = nb.j - na.j;
        if let Shape::Cylinder { .. } = self.spec.shape {
            let p = self.spec.resolution.1 as i64;
            if dj > 1 {
                dj -= p;
            } else if dj < -1 {
                dj += p;
            }
        }
        Complex64::new((nb.i - na.i) as f64 * self.hs, dj as f64 * self.ht)
    }

    /// Looks up the node at lattice position `(i, j)`.
    pub fn find(&self, i: i64, j: i64) -> Option<usize> {
        self.nodes.iter().position(|n| n.i == i && n.j == j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangle_counts() {
        let m = Mesh::new(DomainSpec::new(Shape::Rectangle { length: 2.0 }, 10, 8)).unwrap();
        assert_eq!(m.len(), 11 * 9);
        assert_eq!(m.cells().len(), 80);
        assert_eq!(m.boundary_edges().len(), 36);
        assert_eq!(m.constrained_boundary().len(), 36);
        assert!((m.spacing().0 - 0.2).abs() < 1e-15);
    }

    #[test]
    fn cylinder_is_periodic() {
        let m = Mesh::new(DomainSpec::new(Shape::Cylinder { length: 1.0 }, 8, 8)).unwrap();
        assert_eq!(m.len(), 9 * 8);
        assert_eq!(m.cells().len(), 64);
        // only the two end circles remain as boundary
        assert_eq!(m.boundary_edges().len(), 16);
        let seam = m.cells().iter().find(|c| m.nodes()[c[0]].j == 7).unwrap();
        assert!((m.displacement(seam[1], seam[2]) - Complex64::new(0.0, 0.125)).norm() < 1e-15);
    }

    #[test]
    fn disc_cells_are_inside() {
        let m = Mesh::new(DomainSpec::new(Shape::Disc, 16, 16)).unwrap();
        assert!(m.nodes().iter().all(|n| n.z.norm() < 1.0));
        let area = m.cells().len() as f64 * m.cell_area();
        assert!(area < std::f64::consts::PI && area > 2.6);
        // a closed polygon: every boundary node has one incoming and one outgoing edge
        let mut deg = vec![0i32; m.len()];
        for &(a, b) in m.boundary_edges() {
            deg[a] += 1;
            deg[b] -= 1;
        }
        assert!(deg.iter().all(|&d| d == 0));
    }

    #[test]
    fn half_disc_constrains_the_diameter() {
        let m = Mesh::new(DomainSpec::new(Shape::HalfDisc, 16, 16)).unwrap();
        assert!(m.constrained_boundary().iter().all(|&k| m.position(k).re == 0.0));
        assert!(m.constrained_boundary().len() >= 29);
    }

    #[test]
    fn rejects_coarse_resolution() {
        assert!(Mesh::new(DomainSpec::new(Shape::Disc, 4, 16)).is_err());
    }
}

//! JSON job inputs. Every object rejects unknown fields.

use std::path::PathBuf;

use hypflat_core::connections::manufactured::{conjugated_rotation_loop, rotation_loop};
use hypflat_core::connections::{holonomy, Domain, GaugePath, LiftedHolonomy, PathConnection};
use hypflat_core::cr::{BoundaryCondition, DomainSpec, GridConnection, Mesh, ModelTag, Shape};
use hypflat_core::hyperbolic::{AffLieElement, AffMap, BoundaryPoint, GeodesicGerm, LieElement, LiftedPoint, MoebiusMap};
use hypflat_core::moduli::config::rotation_one_element;
use hypflat_core::moduli::PuncturedConfig;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;

/// A `PU(1,1)` matrix `[[a, b], [b̄, ā]]` with `|a|² - |b|² = 1`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub a: Complex64,
    pub b: Complex64,
}

impl ElementSpec {
    pub fn build(&self) -> CliResult<MoebiusMap> {
        Ok(MoebiusMap::new(self.a, self.b)?)
    }
}

/// A `su(1,1)` generator `(α, β)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub alpha: f64,
    pub beta: Complex64,
}

impl GeneratorSpec {
    pub fn build(&self) -> LieElement {
        LieElement::new(self.alpha, self.beta)
    }
}

/// An affine generator inducing `X = scale_rate·w + shift_rate`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffGeneratorSpec {
    pub scale_rate: f64,
    pub shift_rate: f64,
}

impl AffGeneratorSpec {
    pub fn build(&self) -> AffLieElement {
        AffLieElement::new(self.scale_rate, self.shift_rate)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConnectionSpec {
    Samples {
        domain: Domain,
        samples: Vec<GeneratorSpec>,
    },
    Constant {
        domain: Domain,
        n: usize,
        generator: GeneratorSpec,
    },
    /// `a_t = a + t·b`.
    Linear {
        domain: Domain,
        n: usize,
        a: GeneratorSpec,
        b: GeneratorSpec,
    },
    /// `R(2πt)·exp(tγ)` with `|tr| = τ`, optionally conjugated.
    RotationLoop {
        tau: f64,
        n: usize,
        #[serde(default)]
        conjugate: Option<ElementSpec>,
    },
}

impl ConnectionSpec {
    pub fn build(&self) -> CliResult<PathConnection<MoebiusMap>> {
        Ok(match self {
            ConnectionSpec::Samples { domain, samples } => {
                PathConnection::new(*domain, samples.iter().map(|g| g.build()).collect())?
            }
            ConnectionSpec::Constant { domain, n, generator } => PathConnection::constant(*domain, *n, generator.build())?,
            ConnectionSpec::Linear { domain, n, a, b } => {
                let (a, b) = (a.build(), b.build());
                PathConnection::from_fn(*domain, *n, |t| a + b * t)?
            }
            ConnectionSpec::RotationLoop { tau, n, conjugate: None } => rotation_loop(*tau, *n)?,
            ConnectionSpec::RotationLoop { tau, n, conjugate: Some(k) } => conjugated_rotation_loop(*tau, *n, &k.build()?)?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AffConnectionSpec {
    Samples { domain: Domain, samples: Vec<AffGeneratorSpec> },
    Constant { domain: Domain, n: usize, generator: AffGeneratorSpec },
}

impl AffConnectionSpec {
    pub fn build(&self) -> CliResult<PathConnection<AffMap>> {
        Ok(match self {
            AffConnectionSpec::Samples { domain, samples } => {
                PathConnection::new(*domain, samples.iter().map(|g| g.build()).collect())?
            }
            AffConnectionSpec::Constant { domain, n, generator } => PathConnection::constant(*domain, *n, generator.build())?,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GaugeSpec {
    Samples {
        domain: Domain,
        samples: Vec<ElementSpec>,
    },
    /// `Φ_t = base·exp(tγ)`.
    Exp {
        domain: Domain,
        n: usize,
        generator: GeneratorSpec,
        #[serde(default)]
        base: Option<ElementSpec>,
    },
}

impl GaugeSpec {
    pub fn build(&self) -> CliResult<GaugePath<MoebiusMap>> {
        Ok(match self {
            GaugeSpec::Samples { domain, samples } => {
                GaugePath::new(*domain, samples.iter().map(|g| g.build()).collect::<CliResult<_>>()?)?
            }
            GaugeSpec::Exp { domain, n, generator, base } => {
                let base = base.map(|b| b.build()).transpose()?.unwrap_or_else(MoebiusMap::identity);
                let g = generator.build();
                GaugePath::from_fn(*domain, *n, |t| base.compose(&g.exp(t)))?
            }
        })
    }
}

/// A germ ending at the boundary angle `endpoint` through `anchor`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GermSpec {
    pub endpoint: f64,
    pub anchor: Complex64,
}

impl GermSpec {
    pub fn build(&self) -> CliResult<GeodesicGerm> {
        Ok(GeodesicGerm::new(BoundaryPoint::new(self.endpoint), self.anchor)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum HolonomySpec {
    Connection {
        connection: ConnectionSpec,
    },
    /// The rotation-one element with trace `τ` and the given fixed points.
    RotationOne {
        l_small: f64,
        l_big: f64,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PuncturedSpec {
    pub holonomy: HolonomySpec,
    pub labels: Vec<f64>,
    pub tau: f64,
}

impl PuncturedSpec {
    pub fn build(&self) -> CliResult<PuncturedConfig> {
        let holonomy: LiftedHolonomy = match &self.holonomy {
            HolonomySpec::Connection { connection } => holonomy(&connection.build()?)?,
            HolonomySpec::RotationOne { l_small, l_big } => rotation_one_element(self.tau, *l_small, *l_big)?,
        };
        Ok(PuncturedConfig { holonomy, labels: self.labels.iter().map(|&x| LiftedPoint(x)).collect(), tau: self.tau })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainInput {
    pub shape: Shape,
    pub resolution: (usize, usize),
}

impl DomainInput {
    pub fn mesh(&self) -> CliResult<Mesh> {
        Ok(Mesh::new(DomainSpec::new(self.shape, self.resolution.0, self.resolution.1))?)
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridConnectionSpec {
    #[default]
    Zero,
    /// Constant `A = a_s ds + a_t dt` for the disc model.
    Constant { s: GeneratorSpec, t: GeneratorSpec },
    /// Constant `A` for the half-plane model.
    ConstantAffine { s: AffGeneratorSpec, t: AffGeneratorSpec },
    /// `A = a_t dt` from a loop or interval connection in `t`, disc model.
    Pullback { connection: ConnectionSpec },
}

/// The connection as the algebra of one target model.
pub enum BuiltConnection {
    Disc(GridConnection<LieElement>),
    HalfPlane(GridConnection<AffLieElement>),
}

impl GridConnectionSpec {
    pub fn build(&self, mesh: &Mesh, model: ModelTag) -> CliResult<BuiltConnection> {
        use crate::error::CliError::Precondition;
        Ok(match (self, model) {
            (GridConnectionSpec::Zero, ModelTag::Disc) => BuiltConnection::Disc(GridConnection::zero(mesh)),
            (GridConnectionSpec::Zero, ModelTag::HalfPlane) => BuiltConnection::HalfPlane(GridConnection::zero(mesh)),
            (GridConnectionSpec::Constant { s, t }, ModelTag::Disc) => {
                let (s, t) = (s.build(), t.build());
                BuiltConnection::Disc(GridConnection::from_fn(mesh, |_| (s, t)))
            }
            (GridConnectionSpec::ConstantAffine { s, t }, ModelTag::HalfPlane) => {
                let (s, t) = (s.build(), t.build());
                BuiltConnection::HalfPlane(GridConnection::from_fn(mesh, |_| (s, t)))
            }
            (GridConnectionSpec::Pullback { connection }, ModelTag::Disc) => {
                BuiltConnection::Disc(GridConnection::pullback_t(mesh, &connection.build()?))
            }
            (spec, model) => return Err(Precondition(format!("connection {spec:?} does not act on the {model:?} model"))),
        })
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundarySpec {
    #[default]
    Free,
    /// `re u = value` on the constrained boundary, half-plane model.
    Lines { value: f64 },
    /// One germ on the whole constrained boundary, disc model.
    Germ { germ: GermSpec },
}

impl BoundarySpec {
    pub fn build(&self, mesh: &Mesh) -> CliResult<BoundaryCondition> {
        Ok(match self {
            BoundarySpec::Free => BoundaryCondition::free(),
            BoundarySpec::Lines { value } => BoundaryCondition::lines(mesh, |_| *value),
            BoundarySpec::Germ { germ } => {
                let g = germ.build()?;
                BoundaryCondition::germs(mesh, |_| g)
            }
        })
    }
}

/// A node of the mesh, by lattice index, held at a value.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pin {
    pub i: i64,
    pub j: i64,
    pub w: Complex64,
}

/// A boundary value problem for the CR solver. `map_csv` names a grid
/// written by `solve-cr`; it is read by `energy` and rejected by
/// `solve-cr`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub domain: DomainInput,
    pub model: ModelTag,
    #[serde(default)]
    pub connection: GridConnectionSpec,
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub pins: Vec<Pin>,
    pub guess: Complex64,
    #[serde(default)]
    pub map_csv: Option<PathBuf>,
}

impl ProblemSpec {
    pub fn boundary_condition(&self, mesh: &Mesh) -> CliResult<BoundaryCondition> {
        let mut bc = self.boundary.build(mesh)?;
        for p in &self.pins {
            let k = mesh
                .find(p.i, p.j)
                .ok_or_else(|| crate::error::CliError::Precondition(format!("no node at ({}, {})", p.i, p.j)))?;
            bc = bc.pin(k, p.w);
        }
        Ok(bc)
    }
}

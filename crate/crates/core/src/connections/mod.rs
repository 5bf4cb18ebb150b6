//! Connections on intervals, circles and rectangles: transport, holonomy
//! and its lifts, gauge action, and lattice curvature.

pub mod grid;
pub mod lift;
pub mod manufactured;
pub mod path;

pub use grid::GaugeGrid;
pub use lift::{holonomy, lifted_shift, lifted_transport, LiftedHolonomy, LiftedTransport};
pub use path::{gauge_transform, Domain, GaugePath, PathConnection, DEFAULT_NODES};

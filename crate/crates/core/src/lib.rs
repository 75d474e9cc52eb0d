//! Convex matching distance between `R^2`-valued functions on triangulated
//! surfaces.
//!
//! The distance between `phi = (phi1, phi2)` and `psi = (psi1, psi2)` is the
//! maximum over `t in [0, 1]` of the bottleneck distance between the
//! persistence diagrams of the scalar functions `(1 - t) phi1 + t phi2` and
//! `(1 - t) psi1 + t psi2`. Two independent routes compute it:
//!
//! * [`convex::cmd_maximize`], a Lipschitz branch-and-bound over `t` that
//!   returns a certified value together with a gap,
//! * [`pareto::cmd_via_special_values`], which evaluates only the finitely
//!   many candidate parameters derived from the Pareto-grid contours.
//!
//! Supporting modules cover meshes and fixtures ([`complex`]), lower-star
//! persistence ([`persistence`]), diagrams and the bottleneck distance
//! ([`diagram`]), and the command line ([`cli`]).

pub mod cli;
pub mod complex;
pub mod convex;
pub mod diagram;
pub mod exec;
pub mod json;
pub mod pareto;
pub mod persistence;
pub mod roots;

pub use complex::{BiFunction, MeshFunction, SimplicialComplex, VertexFunction};
pub use convex::{cmd_maximize, CmdMode, CmdResult};
pub use diagram::{bottleneck_distance, DiagramPoint, PersistenceDiagram};
pub use exec::Executor;
pub use persistence::compute_persistence;

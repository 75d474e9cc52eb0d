//! The family `phi^t = (1 - t) phi1 + t phi2`, the function
//! `g(t) = d_B(dgm_k(phi^t), dgm_k(psi^t))` and its certified maximum.

mod bnb;
mod slice;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{lower_star_filtration_to_dim, BiFunction, ComplexError, MeshFunction, SimplicialComplex, VertexFunction};
use crate::diagram::{bottleneck_distance, DiagramError, PersistenceDiagram};
use crate::persistence::{compute_persistence, PersistenceError};

pub use bnb::{cmd_grid, cmd_maximize, cmd_maximize_with, CmdOptions, DEFAULT_EPS};
pub use slice::{matching_distance_lower_bound, slice_function, slice_grid, MatchResult, SlicePoint};

#[derive(Debug, Error)]
pub enum ConvexError {
    #[error("t = {0} is outside [0, 1]")]
    TOutOfRange(f64),
    #[error("slice parameter a = {0} is outside (0, 1)")]
    SliceOutOfRange(f64),
    #[error("eps must be positive, got {0}")]
    NonPositiveEps(f64),
    #[error("grid needs at least {min} points, got {got}")]
    GridTooSmall { got: usize, min: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// How a [`CmdResult`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CmdMode {
    BranchAndBound,
    SpecialValues,
    Grid,
}

impl CmdMode {
    pub fn name(self) -> &'static str {
        match self {
            CmdMode::BranchAndBound => "branch-and-bound",
            CmdMode::SpecialValues => "special-values",
            CmdMode::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    #[serde(with = "crate::json::extended_real")]
    pub g: f64,
}

/// A maximum of `g` over `[0, 1]`. The true maximum is at most
/// `value + gap` whenever `certified` holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CmdResult {
    #[serde(with = "crate::json::extended_real")]
    pub value: f64,
    pub argmax_t: f64,
    pub gap: f64,
    pub mode: CmdMode,
    pub evaluations: usize,
    pub lipschitz: f64,
    pub certified: bool,
    pub special_values: Vec<f64>,
    /// Evaluated points sorted by `t`.
    pub trace: Vec<TracePoint>,
}

impl CmdResult {
    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("result serializes")
    }

    /// Recorded `g` at `t`, if evaluated.
    pub fn traced(&self, t: f64) -> Option<f64> {
        self.trace.iter().find(|p| p.t == t).map(|p| p.g)
    }
}

fn check_t(t: f64) -> Result<(), ConvexError> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(ConvexError::TOutOfRange(t))
    }
}

/// Vertexwise `(1 - t) phi1 + t phi2`; the endpoints return the components
/// unchanged.
pub fn convex_combination(f: &BiFunction, t: f64) -> Result<VertexFunction, ConvexError> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(f.phi1.clone());
    }
    if t == 1.0 {
        return Ok(f.phi2.clone());
    }
    let s = 1.0 - t;
    let values = f.phi1.values().iter().zip(f.phi2.values()).map(|(a, b)| s * a + t * b).collect();
    Ok(VertexFunction::from_vec_unchecked(values))
}

/// `dgm_k` of the lower-star filtration of `f`, building only the simplex
/// dimensions the degree needs.
pub fn diagram_of(complex: &SimplicialComplex, f: &VertexFunction, k: usize) -> Result<PersistenceDiagram, ConvexError> {
    let filtration = lower_star_filtration_to_dim(complex, f, (k + 1).min(2))?;
    Ok(compute_persistence(&filtration, k)?)
}

/// `dgm_k(phi^t)`.
pub fn diagram_at(f: &MeshFunction, k: usize, t: f64) -> Result<PersistenceDiagram, ConvexError> {
    diagram_of(&f.complex, &convex_combination(&f.function, t)?, k)
}

/// `g(t) = d_B(dgm_k(phi^t), dgm_k(psi^t))`.
pub fn g_value(f: &MeshFunction, h: &MeshFunction, k: usize, t: f64) -> Result<f64, ConvexError> {
    let a = diagram_at(f, k, t)?;
    let b = diagram_at(h, k, t)?;
    Ok(bottleneck_distance(&a, &b)?)
}

/// `||phi1 - phi2|| + ||psi1 - psi2||`, a Lipschitz constant of `g`.
pub fn lipschitz_constant(f: &BiFunction, h: &BiFunction) -> f64 {
    f.phi1.sup_distance(&f.phi2) + h.phi1.sup_distance(&h.phi2)
}

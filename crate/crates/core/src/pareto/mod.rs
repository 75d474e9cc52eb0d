//! Pareto-grid contours and the special parameter values of the convex
//! family.

mod branch;
mod contour;
mod geometry;
mod special;
mod spline;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::FixtureKind;
use crate::convex::ConvexError;

pub use branch::{cost_derivative, decompose, Branch, Decomposition, FlatRun};
pub use contour::{
    analytic_contours, analytic_contours_named, contours_to_json, load_contours, parse_contours, save_contours,
    Contour, ContourFile, ContourRecord, EllipticArc, Parametrization, Point2, ANALYTIC_SAMPLES, MIN_SAMPLES,
};
pub use geometry::{
    curvature, orthogonal_intersections, osculating, position_predict, t_of_orthogonality, Hit, OsculatingData,
    CURVATURE_FLOOR,
};
pub use special::{
    closed_form_t, cmd_via_special_values, special_values, special_values_with, Condition, SpecialOptions,
    SpecialReport, SpecialValue, Witness, CONTOUR_LIMIT, DEDUP_TOL,
};
pub use spline::CubicSpline;

#[derive(Debug, Error)]
pub enum ParetoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed contour file: {0}")]
    Json(#[source] serde_json::Error),
    #[error("no analytic contours for `{0}` (expected sphere or ellipsoid(a,c))")]
    NoAnalyticContours(String),
    #[error("contour `{id}` has {got} samples, at least {min} required")]
    TooFewSamples { id: String, got: usize, min: usize },
    #[error("contour `{id}` has a non-finite sample at index {index}")]
    NonFiniteSample { id: String, index: usize },
    #[error("contour `{id}` violates regularity: sample {index} repeats its predecessor (zero tangent)")]
    Regularity { id: String, index: usize },
    #[error("contour `{id}` violates the monotone split at sample {index}: one coordinate must strictly increase while the other strictly decreases")]
    MonotoneSplit { id: String, index: usize },
    #[error("tangent undefined at tau = {tau}")]
    UndefinedTangent { tau: f64 },
    #[error("contour `{id}`: curvature estimate unstable at tau = {tau} (3-point {k3}, 5-point {k5})")]
    Unstable { id: String, tau: f64, k3: f64, k5: f64 },
    #[error("signed radius undefined (zero curvature) on contour `{id}` at t = {t}")]
    UndefinedRadius { id: String, t: f64 },
    #[error("branch of contour `{id}` has no orthogonal hit at t = {t}")]
    NoHit { id: String, t: f64 },
    #[error("t = {0} is outside the allowed range")]
    TOutOfRange(f64),
    #[error("{got} contours exceed the limit of {limit}")]
    TooManyContours { got: usize, limit: usize },
    #[error(transparent)]
    Convex(#[from] ConvexError),
}

/// Pareto criticality of a point of a closed quadric fixture under
/// `phi = (x, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoClassification {
    /// On the Jacobi set: the two restricted gradients are dependent.
    pub jacobi: bool,
    /// Nonnegative `(l1, l2)`, summing to one, with `l1 grad phi1 + l2 grad phi2 = 0`.
    pub multipliers: Option<[f64; 2]>,
}

/// Projects `v` onto the tangent plane with unit normal `n`.
fn tangential(v: [f64; 3], n: [f64; 3]) -> [f64; 3] {
    let d = v[0] * n[0] + v[1] * n[1] + v[2] * n[2];
    [v[0] - d * n[0], v[1] - d * n[1], v[2] - d * n[2]]
}

/// Surface gradients of `x` and `z` at a point of the quadric.
pub fn surface_gradients(kind: FixtureKind, p: [f64; 3]) -> Option<[[f64; 3]; 2]> {
    let (a, c) = kind.semi_axes()?;
    let n = [p[0] / (a * a), p[1], p[2] / (c * c)];
    let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let n = [n[0] / len, n[1] / len, n[2] / len];
    Some([tangential([1.0, 0.0, 0.0], n), tangential([0.0, 0.0, 1.0], n)])
}

/// Closed-form classification for sphere and ellipsoid fixtures; `None` for
/// other surfaces.
pub fn classify(kind: FixtureKind, p: [f64; 3], tol: f64) -> Option<ParetoClassification> {
    let (a, c) = kind.semi_axes()?;
    // gradients are dependent exactly on the y = 0 section, where
    // (l1, l2) is proportional to (x / a^2, z / c^2)
    let jacobi = p[1].abs() <= tol;
    let (mut l1, mut l2) = (p[0] / (a * a), p[2] / (c * c));
    if l1 < 0.0 || l2 < 0.0 {
        l1 = -l1;
        l2 = -l2;
    }
    let multipliers = if jacobi && l1 >= -tol && l2 >= -tol {
        let s = l1 + l2;
        Some([l1.max(0.0) / s, l2.max(0.0) / s])
    } else {
        None
    };
    Some(ParetoClassification { jacobi, multipliers })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multipliers_annihilate_gradients() {
        let kind = FixtureKind::Ellipsoid { a: 2.0, c: 1.0 };
        for th in [3.3, 3.9, 4.5, 0.2, 1.1] {
            let p = [2.0 * f64::cos(th), 0.0, f64::sin(th)];
            let cl = classify(kind, p, 1e-12).unwrap();
            assert!(cl.jacobi);
            let [l1, l2] = cl.multipliers.expect("xz >= 0 on these arcs");
            assert!(l1 >= 0.0 && l2 >= 0.0);
            let [g1, g2] = surface_gradients(kind, p).unwrap();
            for k in 0..3 {
                assert!((l1 * g1[k] + l2 * g2[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mixed_quadrants_are_not_pareto_critical() {
        let kind = FixtureKind::Sphere;
        let th: f64 = 2.0;
        let cl = classify(kind, [th.cos(), 0.0, th.sin()], 1e-12).unwrap();
        assert!(cl.jacobi && cl.multipliers.is_none());
        let off = classify(kind, [0.6, 0.8, 0.0], 1e-12).unwrap();
        assert!(!off.jacobi && off.multipliers.is_none());
        assert!(classify(FixtureKind::Cone, [0.0; 3], 1e-12).is_none());
    }
}

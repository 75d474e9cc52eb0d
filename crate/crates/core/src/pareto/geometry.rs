//! Orthogonal intersections, predicted diagram coordinates, and osculating
//! circles of contours.

use serde::{Deserialize, Serialize};

use super::contour::{Contour, Parametrization, Point2};
use super::ParetoError;
use crate::roots::{brent_with_values, uniform_grid};

/// Curvature magnitudes below this count as zero.
pub const CURVATURE_FLOOR: f64 = 1e-9;
/// Normalized `|alpha' . (1 - t, t)|` treated as zero.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;
/// `tau` tolerance of the root finder.
pub const TAU_TOL: f64 = 1e-12;
/// Largest accepted relative disagreement between 3- and 5-point curvature.
pub const STENCIL_TOL: f64 = 1e-3;

fn norm(v: Point2) -> f64 {
    v[0].hypot(v[1])
}

fn cross(a: Point2, b: Point2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// The `t` in `[0, 1]` making `(1 - t, t)` orthogonal to the tangent at `tau`.
pub fn t_of_orthogonality(c: &Contour, tau: f64) -> Result<f64, ParetoError> {
    t_from_derivative(c.derivative(tau), tau)
}

fn t_from_derivative(d: Point2, tau: f64) -> Result<f64, ParetoError> {
    let den = d[0] - d[1];
    if !(norm(d) > 0.0) || den == 0.0 {
        return Err(ParetoError::UndefinedTangent { tau });
    }
    let t = d[0] / den;
    Ok(if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        t
    })
}

/// A parameter where the line direction `(1 - t, t)` meets the contour
/// orthogonally, with the point and its value `w = P . (1 - t, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hit {
    pub tau: f64,
    pub point: Point2,
    pub w: f64,
}

fn hit(c: &Contour, tau: f64, t: f64) -> Hit {
    let p = c.point(tau);
    Hit { tau, point: p, w: (1.0 - t) * p[0] + t * p[1] }
}

/// Scan resolution in `tau`.
fn scan_grid(c: &Contour) -> Vec<f64> {
    let n = match &c.parametrization {
        Parametrization::Elliptic(_) => 256,
        Parametrization::Spline { .. } => 4 * (c.samples.len() - 1),
    };
    uniform_grid(0.0, 1.0, n)
}

/// Every `tau` where the tangent is orthogonal to `(1 - t, t)`. A straight
/// piece lying wholly orthogonal contributes its two ends.
pub fn orthogonal_intersections(c: &Contour, t: f64) -> Result<Vec<Hit>, ParetoError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(ParetoError::TOutOfRange(t));
    }
    let f = |tau: f64| {
        let d = c.derivative(tau);
        (1.0 - t) * d[0] + t * d[1]
    };
    let grid = scan_grid(c);
    let raw: Vec<f64> = grid.iter().map(|&tau| f(tau)).collect();
    let zero: Vec<bool> = grid
        .iter()
        .zip(&raw)
        .map(|(&tau, &v)| v.abs() <= ORTHOGONALITY_TOL * norm(c.derivative(tau)))
        .collect();
    let mut taus = Vec::new();
    let n = grid.len();
    let mut i = 0;
    while i < n {
        if zero[i] {
            let start = i;
            while i + 1 < n && zero[i + 1] {
                i += 1;
            }
            taus.push(grid[start]);
            if i > start {
                taus.push(grid[i]);
            } else if start > 0 && start + 1 < n && raw[start] != 0.0 {
                // isolated near-zero: refine if a sign change brackets it
                let (lo, hi) = (start - 1, start + 1);
                if raw[lo].signum() != raw[hi].signum() {
                    if let Some(r) = brent_with_values(f, grid[lo], grid[hi], raw[lo], raw[hi], TAU_TOL) {
                        taus.pop();
                        taus.push(r);
                    }
                }
            }
            i += 1;
            continue;
        }
        if i + 1 < n && !zero[i + 1] && raw[i].signum() != raw[i + 1].signum() {
            if let Some(r) = brent_with_values(f, grid[i], grid[i + 1], raw[i], raw[i + 1], TAU_TOL) {
                taus.push(r);
            }
        }
        i += 1;
    }
    taus.sort_by(f64::total_cmp);
    taus.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * TAU_TOL);
    Ok(taus.into_iter().map(|tau| hit(c, tau, t)).collect())
}

/// Costs `w` of all orthogonal hits at `t`, sorted. Every finite diagram
/// coordinate of `phi^t` is among them.
pub fn position_predict(contours: &[Contour], t: f64) -> Result<Vec<f64>, ParetoError> {
    let mut ws = Vec::new();
    for c in contours {
        ws.extend(orthogonal_intersections(c, t)?.into_iter().map(|h| h.w));
    }
    ws.sort_by(f64::total_cmp);
    ws.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    Ok(ws)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OsculatingData {
    pub point: Point2,
    pub tangent: Point2,
    /// Signed curvature, positive when the curve turns left.
    pub curvature: f64,
    pub center: Option<Point2>,
    pub signed_radius: Option<f64>,
}

/// Curvature from a position jet.
fn jet_curvature(d1: Point2, d2: Point2) -> f64 {
    cross(d1, d2) / norm(d1).powi(3)
}

/// Spline curvature from finite stencils of the sampled curve, checked
/// against the 3-point estimate.
fn stencil_curvature(c: &Contour, tau: f64) -> Result<f64, ParetoError> {
    let h = 1.0 / (c.samples.len() - 1) as f64;
    let p = |k: f64| c.jet(tau + k * h)[0];
    let (m2, m1, z, p1, p2) = (p(-2.0), p(-1.0), p(0.0), p(1.0), p(2.0));
    let mut d1_5 = [0.0; 2];
    let mut d2_5 = [0.0; 2];
    let mut d1_3 = [0.0; 2];
    let mut d2_3 = [0.0; 2];
    for k in 0..2 {
        d1_5[k] = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
        d2_5[k] = (-p2[k] + 16.0 * p1[k] - 30.0 * z[k] + 16.0 * m1[k] - m2[k]) / (12.0 * h * h);
        d1_3[k] = (p1[k] - m1[k]) / (2.0 * h);
        d2_3[k] = (p1[k] - 2.0 * z[k] + m1[k]) / (h * h);
    }
    let k5 = jet_curvature(d1_5, d2_5);
    let k3 = jet_curvature(d1_3, d2_3);
    if (k5 - k3).abs() > STENCIL_TOL * k5.abs().max(1.0) {
        return Err(ParetoError::Unstable { id: c.id.clone(), tau, k3, k5 });
    }
    Ok(k5)
}

/// Signed curvature at `tau`: exact for analytic arcs, stencil-based for
/// sampled contours.
pub fn curvature(c: &Contour, tau: f64) -> Result<f64, ParetoError> {
    match c.parametrization {
        Parametrization::Elliptic(_) => {
            let [_, d1, d2] = c.jet(tau);
            Ok(jet_curvature(d1, d2))
        }
        Parametrization::Spline { .. } => stencil_curvature(c, tau),
    }
}

/// Osculating circle at `tau`. The radius is signed by the side of the
/// centre on which the point lies in the first coordinate; when the point is
/// (nearly) straight above or below the centre the second coordinate decides.
pub fn osculating(c: &Contour, tau: f64) -> Result<OsculatingData, ParetoError> {
    let point = c.point(tau);
    let d1 = c.derivative(tau);
    let len = norm(d1);
    if !(len > 0.0) {
        return Err(ParetoError::UndefinedTangent { tau });
    }
    let tangent = [d1[0] / len, d1[1] / len];
    let kappa = curvature(c, tau)?;
    if kappa.abs() < CURVATURE_FLOOR {
        return Ok(OsculatingData { point, tangent, curvature: kappa, center: None, signed_radius: None });
    }
    let rho = 1.0 / kappa.abs();
    let normal = [-tangent[1], tangent[0]];
    let center = [point[0] + normal[0] / kappa, point[1] + normal[1] / kappa];
    let dx = point[0] - center[0];
    let dy = point[1] - center[1];
    // sampled contours only fix the centre to the stencil accuracy
    let side_tol = if c.is_analytic() { 1e-12 } else { STENCIL_TOL };
    let sign = if dx.abs() > side_tol * rho { dx.signum() } else { dy.signum() };
    Ok(OsculatingData { point, tangent, curvature: kappa, center: Some(center), signed_radius: Some(sign * rho) })
}

//! Pieces of a contour on which the orthogonality parameter is monotone.
//!
//! `dt/dtau` has the sign of `alpha' x alpha''`, so branches are separated
//! by curvature zeros. Straight pieces, where `t` is constant, are kept
//! apart as flat runs.

use std::sync::Arc;

use super::contour::{Contour, Parametrization};
use super::geometry::{osculating, t_of_orthogonality, Hit, OsculatingData, CURVATURE_FLOOR};
use super::ParetoError;
use crate::roots::{brent, brent_with_values, uniform_grid};

#[derive(Debug, Clone)]
pub struct Branch {
    pub contour: Arc<Contour>,
    pub tau: [f64; 2],
    /// `[min, max]` of `t` over the branch.
    pub t_range: [f64; 2],
    t_ends: [f64; 2],
}

/// Zero-curvature piece of a contour, orthogonal to a single direction.
#[derive(Debug, Clone)]
pub struct FlatRun {
    pub contour: Arc<Contour>,
    pub tau: [f64; 2],
    pub t: f64,
}

#[derive(Debug, Clone, Default)]
pub struct Decomposition {
    pub branches: Vec<Branch>,
    pub flats: Vec<FlatRun>,
    /// Isolated curvature zeros as `(tau, t)`.
    pub inflections: Vec<(f64, f64)>,
}

fn signed_curvature(c: &Contour, tau: f64) -> f64 {
    let [_, d1, d2] = c.jet(tau);
    (d1[0] * d2[1] - d1[1] * d2[0]) / d1[0].hypot(d1[1]).powi(3)
}

fn class(kappa: f64) -> i8 {
    if kappa.abs() < CURVATURE_FLOOR {
        0
    } else if kappa > 0.0 {
        1
    } else {
        -1
    }
}

/// Splits `c` at curvature zeros.
pub fn decompose(c: Arc<Contour>) -> Result<Decomposition, ParetoError> {
    let n = match c.parametrization {
        Parametrization::Elliptic(_) => 256,
        Parametrization::Spline { .. } => 8 * (c.samples.len() - 1),
    };
    let grid = uniform_grid(0.0, 1.0, n);
    let kappa: Vec<f64> = grid.iter().map(|&tau| signed_curvature(&c, tau)).collect();
    let cls: Vec<i8> = kappa.iter().map(|&k| class(k)).collect();

    // cut intervals in tau; branches are what remains
    let mut cuts: Vec<[f64; 2]> = Vec::new();
    let mut out = Decomposition::default();
    let mut i = 0;
    while i < grid.len() {
        if cls[i] == 0 {
            let start = i;
            while i + 1 < grid.len() && cls[i + 1] == 0 {
                i += 1;
            }
            if i > start {
                let tau = [grid[start], grid[i]];
                let t = t_of_orthogonality(&c, 0.5 * (tau[0] + tau[1]))?;
                out.flats.push(FlatRun { contour: c.clone(), tau, t });
                cuts.push(tau);
            } else {
                let tau = grid[start];
                out.inflections.push((tau, t_of_orthogonality(&c, tau)?));
                cuts.push([tau, tau]);
            }
        } else if i + 1 < grid.len() && cls[i + 1] != 0 && cls[i + 1] != cls[i] {
            let tau = brent_with_values(|s| signed_curvature(&c, s), grid[i], grid[i + 1], kappa[i], kappa[i + 1], 1e-14)
                .unwrap_or(0.5 * (grid[i] + grid[i + 1]));
            out.inflections.push((tau, t_of_orthogonality(&c, tau)?));
            cuts.push([tau, tau]);
        }
        i += 1;
    }

    let mut lo = 0.0;
    let mut pieces = Vec::new();
    for cut in &cuts {
        if cut[0] - lo > 1e-9 {
            pieces.push([lo, cut[0]]);
        }
        lo = cut[1];
    }
    if 1.0 - lo > 1e-9 {
        pieces.push([lo, 1.0]);
    }
    for tau in pieces {
        let t_ends = [t_of_orthogonality(&c, tau[0])?, t_of_orthogonality(&c, tau[1])?];
        let t_range = [t_ends[0].min(t_ends[1]), t_ends[0].max(t_ends[1])];
        out.branches.push(Branch { contour: c.clone(), tau, t_range, t_ends });
    }
    Ok(out)
}

impl Branch {
    pub fn id(&self) -> &str {
        &self.contour.id
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_range[0] && t <= self.t_range[1]
    }

    /// The parameter on this branch orthogonal to `(1 - t, t)`.
    pub fn tau_at(&self, t: f64) -> Option<f64> {
        if !self.contains(t) {
            return None;
        }
        if t == self.t_ends[0] {
            return Some(self.tau[0]);
        }
        if t == self.t_ends[1] {
            return Some(self.tau[1]);
        }
        let c = &self.contour;
        let f = |tau: f64| t_of_orthogonality(c, tau).unwrap_or(f64::NAN) - t;
        brent_with_values(f, self.tau[0], self.tau[1], self.t_ends[0] - t, self.t_ends[1] - t, 1e-14)
            .or_else(|| brent(f, self.tau[0], self.tau[1], 1e-14))
    }

    pub fn hit(&self, t: f64) -> Option<Hit> {
        let tau = self.tau_at(t)?;
        let p = self.contour.point(tau);
        Some(Hit { tau, point: p, w: (1.0 - t) * p[0] + t * p[1] })
    }

    pub fn w(&self, t: f64) -> Option<f64> {
        self.hit(t).map(|h| h.w)
    }

    /// Osculating circle at the hit for `t`.
    pub fn osculating_at(&self, t: f64) -> Result<(Hit, OsculatingData), ParetoError> {
        let h = self.hit(t).ok_or_else(|| ParetoError::NoHit { id: self.id().to_string(), t })?;
        Ok((h, osculating(&self.contour, h.tau)?))
    }

    /// `d w / d theta` with `(1 - t, t)` proportional to `(cos theta, sin theta)`.
    pub fn cost_slope(&self, t: f64) -> Result<f64, ParetoError> {
        let (_, o) = self.osculating_at(t)?;
        let (Some(center), Some(ell)) = (o.center, o.signed_radius) else {
            return Err(ParetoError::UndefinedRadius { id: self.id().to_string(), t });
        };
        let theta = t.atan2(1.0 - t);
        let (s, c) = theta.sin_cos();
        Ok((center[1] - center[0] + ell * (s - c)) / ((c + s) * (c + s)))
    }
}

/// Derivative in `theta` of `w1 - w2` at `theta = atan(t / (1 - t))`.
pub fn cost_derivative(b1: &Branch, b2: &Branch, t: f64) -> Result<f64, ParetoError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(ParetoError::TOutOfRange(t));
    }
    Ok(b1.cost_slope(t)? - b2.cost_slope(t)?)
}

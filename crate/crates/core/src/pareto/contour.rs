//! Planar contours of the Pareto grid.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spline::CubicSpline;
use super::ParetoError;
use crate::complex::FixtureKind;

pub const MIN_SAMPLES: usize = 8;
/// Samples written for analytic contours.
pub const ANALYTIC_SAMPLES: usize = 65;

pub type Point2 = [f64; 2];

/// `center + (a cos theta, c sin theta)` for `theta` running linearly from
/// `theta0` to `theta1` as `tau` goes from 0 to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArc {
    pub center: Point2,
    pub a: f64,
    pub c: f64,
    pub theta0: f64,
    pub theta1: f64,
}

// cos/sin with values within rounding of zero snapped, so quarter-turn
// endpoints land exactly on the axes
fn trig(theta: f64) -> (f64, f64) {
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    (snap(theta.cos()), snap(theta.sin()))
}

impl EllipticArc {
    fn theta(&self, tau: f64) -> f64 {
        if tau == 1.0 {
            self.theta1
        } else {
            self.theta0 + tau * (self.theta1 - self.theta0)
        }
    }

    fn eval(&self, tau: f64) -> [Point2; 3] {
        let (cs, sn) = trig(self.theta(tau));
        let w = self.theta1 - self.theta0;
        [
            [self.center[0] + self.a * cs, self.center[1] + self.c * sn],
            [-self.a * sn * w, self.c * cs * w],
            [-self.a * cs * w * w, -self.c * sn * w * w],
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Parametrization {
    Elliptic(EllipticArc),
    Spline { x: CubicSpline, y: CubicSpline },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub id: String,
    pub samples: Vec<Point2>,
    pub provenance: String,
    pub parametrization: Parametrization,
}

/// Serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourRecord {
    pub id: String,
    pub samples: Vec<Point2>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourFile {
    pub contours: Vec<ContourRecord>,
}

fn validate(id: &str, samples: &[Point2]) -> Result<(), ParetoError> {
    if samples.len() < MIN_SAMPLES {
        return Err(ParetoError::TooFewSamples { id: id.to_string(), got: samples.len(), min: MIN_SAMPLES });
    }
    if let Some(index) = samples.iter().position(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(ParetoError::NonFiniteSample { id: id.to_string(), index });
    }
    if let Some(i) = samples.windows(2).position(|w| w[0] == w[1]) {
        return Err(ParetoError::Regularity { id: id.to_string(), index: i + 1 });
    }
    let dx0 = samples[1][0] - samples[0][0];
    let sign = if dx0 != 0.0 { dx0.signum() } else { -(samples[1][1] - samples[0][1]).signum() };
    for (i, w) in samples.windows(2).enumerate() {
        let dx = w[1][0] - w[0][0];
        let dy = w[1][1] - w[0][1];
        if !(dx * sign > 0.0 && dy * sign < 0.0) {
            return Err(ParetoError::MonotoneSplit { id: id.to_string(), index: i + 1 });
        }
    }
    Ok(())
}

impl Contour {
    /// Contour through `samples` at uniformly spaced parameters, after
    /// checking regularity and the monotone split.
    pub fn from_samples(id: impl Into<String>, samples: Vec<Point2>, provenance: impl Into<String>) -> Result<Self, ParetoError> {
        let id = id.into();
        validate(&id, &samples)?;
        let xs: Vec<f64> = samples.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = samples.iter().map(|p| p[1]).collect();
        Ok(Contour {
            id,
            samples,
            provenance: provenance.into(),
            parametrization: Parametrization::Spline { x: CubicSpline::new(&xs), y: CubicSpline::new(&ys) },
        })
    }

    pub fn elliptic(id: impl Into<String>, arc: EllipticArc, provenance: impl Into<String>) -> Result<Self, ParetoError> {
        let id = id.into();
        let samples = (0..ANALYTIC_SAMPLES)
            .map(|i| arc.eval(i as f64 / (ANALYTIC_SAMPLES - 1) as f64)[0])
            .collect::<Vec<_>>();
        validate(&id, &samples)?;
        Ok(Contour { id, samples, provenance: provenance.into(), parametrization: Parametrization::Elliptic(arc) })
    }

    /// Position and first two derivatives with respect to `tau`.
    pub fn jet(&self, tau: f64) -> [Point2; 3] {
        match &self.parametrization {
            Parametrization::Elliptic(arc) => arc.eval(tau),
            Parametrization::Spline { x, y } => {
                let [x0, x1, x2] = x.eval(tau);
                let [y0, y1, y2] = y.eval(tau);
                [[x0, y0], [x1, y1], [x2, y2]]
            }
        }
    }

    pub fn point(&self, tau: f64) -> Point2 {
        if tau == 0.0 {
            return self.samples[0];
        }
        if tau == 1.0 {
            return self.samples[self.samples.len() - 1];
        }
        self.jet(tau)[0]
    }

    pub fn derivative(&self, tau: f64) -> Point2 {
        self.jet(tau)[1]
    }

    pub fn endpoints(&self) -> [Point2; 2] {
        [self.samples[0], self.samples[self.samples.len() - 1]]
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.parametrization, Parametrization::Elliptic(_))
    }

    /// The same curve shifted by `offset`.
    pub fn translated(&self, id: impl Into<String>, offset: Point2) -> Self {
        let samples: Vec<Point2> = self.samples.iter().map(|p| [p[0] + offset[0], p[1] + offset[1]]).collect();
        let parametrization = match &self.parametrization {
            Parametrization::Elliptic(arc) => Parametrization::Elliptic(EllipticArc {
                center: [arc.center[0] + offset[0], arc.center[1] + offset[1]],
                ..*arc
            }),
            Parametrization::Spline { .. } => {
                let xs: Vec<f64> = samples.iter().map(|p| p[0]).collect();
                let ys: Vec<f64> = samples.iter().map(|p| p[1]).collect();
                Parametrization::Spline { x: CubicSpline::new(&xs), y: CubicSpline::new(&ys) }
            }
        };
        Contour { id: id.into(), samples, provenance: format!("{} translated", self.provenance), parametrization }
    }

    pub fn record(&self) -> ContourRecord {
        ContourRecord { id: self.id.clone(), samples: self.samples.clone(), provenance: self.provenance.clone() }
    }
}

/// Closed-form contours of `(x, z)` on a closed quadric fixture: the arcs of
/// the `y = 0` section in the closed first and third quadrants.
pub fn analytic_contours(kind: FixtureKind) -> Result<Vec<Contour>, ParetoError> {
    let (a, c) = kind.semi_axes().ok_or_else(|| ParetoError::NoAnalyticContours(kind.to_string()))?;
    let name = kind.to_string();
    let arc = |theta0: f64, theta1: f64| EllipticArc { center: [0.0, 0.0], a, c, theta0, theta1 };
    Ok(vec![
        Contour::elliptic(format!("{name}/q1"), arc(0.0, 0.5 * PI), format!("fixture:{name}"))?,
        Contour::elliptic(format!("{name}/q3"), arc(PI, 1.5 * PI), format!("fixture:{name}"))?,
    ])
}

/// Analytic contours by fixture name, e.g. `ellipsoid(2,1)`.
pub fn analytic_contours_named(name: &str) -> Result<Vec<Contour>, ParetoError> {
    let kind: FixtureKind = name.parse().map_err(|_| ParetoError::NoAnalyticContours(name.to_string()))?;
    analytic_contours(kind)
}

pub fn parse_contours(text: &str) -> Result<Vec<Contour>, ParetoError> {
    let file: ContourFile = serde_json::from_str(text).map_err(ParetoError::Json)?;
    file.contours
        .into_iter()
        .map(|r| Contour::from_samples(r.id, r.samples, r.provenance))
        .collect()
}

pub fn load_contours(path: &Path) -> Result<Vec<Contour>, ParetoError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParetoError::Io { path: path.to_path_buf(), source })?;
    parse_contours(&text)
}

pub fn contours_to_json(contours: &[Contour]) -> String {
    let file = ContourFile { contours: contours.iter().map(Contour::record).collect() };
    crate::json::to_string(&file).expect("contours serialize")
}

pub fn save_contours(contours: &[Contour], path: &Path) -> Result<(), ParetoError> {
    std::fs::write(path, contours_to_json(contours)).map_err(|source| ParetoError::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_contours() {
        let cs = analytic_contours(FixtureKind::Sphere).unwrap();
        assert_eq!(cs.len(), 2);
        assert_eq!(cs[1].endpoints(), [[-1.0, 0.0], [0.0, -1.0]]);
        assert_eq!(cs[0].endpoints(), [[1.0, 0.0], [0.0, 1.0]]);
        let e = analytic_contours(FixtureKind::Ellipsoid { a: 1.0, c: 1.0 }).unwrap();
        for (x, y) in cs.iter().zip(&e) {
            assert_eq!(x.samples, y.samples);
        }
        let e2 = analytic_contours(FixtureKind::Ellipsoid { a: 2.0, c: 1.0 }).unwrap();
        assert_eq!(e2[1].endpoints(), [[-2.0, 0.0], [0.0, -1.0]]);
        assert!(matches!(analytic_contours(FixtureKind::Cone), Err(ParetoError::NoAnalyticContours(_))));
    }

    #[test]
    fn samples_round_trip_through_json() {
        let cs = analytic_contours(FixtureKind::Sphere).unwrap();
        let text = contours_to_json(&cs[1..]);
        let back = parse_contours(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].samples, cs[1].samples);
        let mid = back[0].point(0.5);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((mid[0] + h).abs() < 1e-6 && (mid[1] + h).abs() < 1e-6);
    }

    #[test]
    fn rejects_invalid_samples() {
        let rising: Vec<Point2> = (0..10).map(|i| [i as f64, i as f64]).collect();
        assert!(matches!(Contour::from_samples("r", rising, "test"), Err(ParetoError::MonotoneSplit { .. })));
        let mut rep: Vec<Point2> = (0..10).map(|i| [i as f64, -(i as f64)]).collect();
        rep[4] = rep[3];
        assert!(matches!(Contour::from_samples("r", rep, "test"), Err(ParetoError::Regularity { index: 4, .. })));
        let short: Vec<Point2> = (0..5).map(|i| [i as f64, -(i as f64)]).collect();
        assert!(matches!(Contour::from_samples("s", short, "test"), Err(ParetoError::TooFewSamples { .. })));
        assert!(matches!(parse_contours("{\"contours\": 3}"), Err(ParetoError::Json(_))));
    }

    #[test]
    fn translation_moves_every_point() {
        let c = &analytic_contours(FixtureKind::Sphere).unwrap()[1];
        let t = c.translated("moved", [0.3, 0.3]);
        for tau in [0.0, 0.3, 1.0] {
            let (p, q) = (c.point(tau), t.point(tau));
            assert!((q[0] - p[0] - 0.3).abs() < 1e-15 && (q[1] - p[1] - 0.3).abs() < 1e-15);
            assert_eq!(c.derivative(tau), t.derivative(tau));
        }
    }
}

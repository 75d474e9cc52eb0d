//! Built-in analytic surfaces, all carrying `phi(x, y, z) = (x, z)`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use super::{BiFunction, ComplexError, Point3, SimplicialComplex, VertexFunction};

pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixtureKind {
    /// Cone from the apex `(1, 0, 1)` over the circle of radius `sqrt 2`
    /// centred at the origin in the plane `x + z = 0`.
    Cone,
    /// Flat disk bounded by the same circle.
    Disk,
    /// Unit sphere.
    Sphere,
    /// `x^2/a^2 + y^2 + z^2/c^2 = 1`.
    Ellipsoid { a: f64, c: f64 },
}

impl FixtureKind {
    /// Closed surfaces carry analytic Pareto-grid contours.
    pub fn is_closed(self) -> bool {
        matches!(self, FixtureKind::Sphere | FixtureKind::Ellipsoid { .. })
    }

    /// Semi-axes `(a, c)` in the `x` and `z` directions for closed fixtures.
    pub fn semi_axes(self) -> Option<(f64, f64)> {
        match self {
            FixtureKind::Sphere => Some((1.0, 1.0)),
            FixtureKind::Ellipsoid { a, c } => Some((a, c)),
            _ => None,
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureKind::Cone => write!(f, "cone"),
            FixtureKind::Disk => write!(f, "disk"),
            FixtureKind::Sphere => write!(f, "sphere"),
            FixtureKind::Ellipsoid { a, c } => write!(f, "ellipsoid({a},{c})"),
        }
    }
}

impl FromStr for FixtureKind {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "cone" => return Ok(FixtureKind::Cone),
            "disk" => return Ok(FixtureKind::Disk),
            "sphere" => return Ok(FixtureKind::Sphere),
            _ => {}
        }
        let args = s
            .strip_prefix("ellipsoid(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ComplexError::UnknownFixture(s.to_string()))?;
        let parts: Vec<f64> = args
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ComplexError::UnknownFixture(s.to_string()))?;
        match parts[..] {
            [a, c] if a > 0.0 && c > 0.0 && a.is_finite() && c.is_finite() => Ok(FixtureKind::Ellipsoid { a, c }),
            _ => Err(ComplexError::UnknownFixture(s.to_string())),
        }
    }
}

/// `NAME:RES` as accepted on the command line, e.g. `cone:64` or
/// `ellipsoid(2,1):64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub resolution: usize,
}

impl FromStr for FixtureSpec {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, res) = s.rsplit_once(':').ok_or_else(|| ComplexError::BadFixtureSpec(s.to_string()))?;
        let resolution = res.trim().parse().map_err(|_| ComplexError::BadFixtureSpec(s.to_string()))?;
        Ok(FixtureSpec { kind: name.parse()?, resolution })
    }
}

impl fmt::Display for FixtureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.resolution)
    }
}

/// Point on the unit circle at angle `2 pi k / n`, exact at quarter turns.
fn unit_circle(k: usize, n: usize) -> (f64, f64) {
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * k as f64 / n as f64;
    (theta.cos(), theta.sin())
}

/// Triangulates `kind` at the given resolution and samples `(x, z)`.
pub fn fixture(kind: FixtureKind, resolution: usize) -> Result<(SimplicialComplex, BiFunction), ComplexError> {
    if resolution < MIN_RESOLUTION {
        return Err(ComplexError::ResolutionTooLow { got: resolution, min: MIN_RESOLUTION });
    }
    let (vertices, triangles) = match kind {
        FixtureKind::Cone => cone(resolution),
        FixtureKind::Disk => disk(resolution),
        FixtureKind::Sphere => quadric(1.0, 1.0, resolution),
        FixtureKind::Ellipsoid { a, c } => quadric(a, c, resolution),
    };
    let phi = BiFunction {
        phi1: VertexFunction::from_vec_unchecked(vertices.iter().map(|p| p[0]).collect()),
        phi2: VertexFunction::from_vec_unchecked(vertices.iter().map(|p| p[2]).collect()),
    };
    let complex = SimplicialComplex::from_triangles(vertices, triangles, Vec::new())?;
    Ok((complex, phi))
}

/// Point of the boundary circle `S` at sector `i` of `n`.
fn boundary_circle(i: usize, n: usize) -> Point3 {
    let (c, s) = unit_circle(i, n);
    [c, SQRT_2 * s, -c]
}

// ring-major grid of `rings x n` vertices; quads between consecutive rings
fn ring_quads(rings: usize, n: usize, offset: usize, triangles: &mut Vec<[usize; 3]>) {
    for j in 0..rings.saturating_sub(1) {
        for i in 0..n {
            let a = offset + j * n + i;
            let b = offset + j * n + (i + 1) % n;
            let c = offset + (j + 1) * n + (i + 1) % n;
            let d = offset + (j + 1) * n + i;
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
}

fn cone(n: usize) -> (Vec<Point3>, Vec<[usize; 3]>) {
    let apex = [1.0, 0.0, 1.0];
    let mut vertices = Vec::with_capacity(n * n + 1);
    for j in 0..n {
        let s = j as f64 / n as f64;
        for i in 0..n {
            let p = boundary_circle(i, n);
            let u = 1.0 - s;
            vertices.push([u * p[0] + s * apex[0], u * p[1], u * p[2] + s * apex[2]]);
        }
    }
    vertices.push(apex);
    let mut triangles = Vec::with_capacity(2 * n * n);
    ring_quads(n, n, 0, &mut triangles);
    let tip = n * n;
    for i in 0..n {
        triangles.push([(n - 1) * n + i, (n - 1) * n + (i + 1) % n, tip]);
    }
    (vertices, triangles)
}

fn disk(n: usize) -> (Vec<Point3>, Vec<[usize; 3]>) {
    let mut vertices = Vec::with_capacity(n * n + 1);
    vertices.push([0.0, 0.0, 0.0]);
    for j in 1..=n {
        let rho = j as f64 / n as f64;
        for i in 0..n {
            let p = boundary_circle(i, n);
            let x = rho * p[0];
            vertices.push([x, rho * p[1], -x]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        triangles.push([0, 1 + i, 1 + (i + 1) % n]);
    }
    ring_quads(n, n, 1, &mut triangles);
    (vertices, triangles)
}

/// Latitude/longitude mesh with poles on the `y` axis, so that the great
/// circle `y = 0` (where the Pareto critical set lives) is a vertex ring.
fn quadric(a: f64, c: f64, n: usize) -> (Vec<Point3>, Vec<[usize; 3]>) {
    let m = n / 2;
    let rings = m - 1;
    let mut vertices = Vec::with_capacity(rings * n + 2);
    vertices.push([0.0, 1.0, 0.0]);
    for j in 1..m {
        let (cos_p, sin_p) = unit_circle(j, 2 * m);
        for i in 0..n {
            let (ct, st) = unit_circle(i, n);
            vertices.push([a * sin_p * ct, cos_p, c * sin_p * st]);
        }
    }
    vertices.push([0.0, -1.0, 0.0]);
    let south = vertices.len() - 1;
    let mut triangles = Vec::with_capacity(2 * rings * n);
    for i in 0..n {
        triangles.push([0, 1 + i, 1 + (i + 1) % n]);
    }
    ring_quads(rings, n, 1, &mut triangles);
    let last = 1 + (rings - 1) * n;
    for i in 0..n {
        triangles.push([last + i, last + (i + 1) % n, south]);
    }
    (vertices, triangles)
}

/// One-sided Hausdorff distance from the analytic closed surface to the
/// vertex set, estimated on a dense parametric sample. Vertices lie on the
/// surface, so the other side is zero.
pub fn hausdorff_to_surface(kind: FixtureKind, complex: &SimplicialComplex, samples: usize) -> Option<f64> {
    let (a, c) = kind.semi_axes()?;
    let mut worst: f64 = 0.0;
    for j in 0..=samples {
        let polar = PI * j as f64 / samples as f64;
        for i in 0..(2 * samples) {
            let theta = PI * i as f64 / samples as f64;
            let p = [a * polar.sin() * theta.cos(), polar.cos(), c * polar.sin() * theta.sin()];
            let nearest = complex
                .vertices()
                .iter()
                .map(|v| (0..3).map(|k| (v[k] - p[k]).powi(2)).sum::<f64>())
                .fold(f64::INFINITY, f64::min)
                .sqrt();
            worst = worst.max(nearest);
        }
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fixture_specs() {
        let s: FixtureSpec = "ellipsoid(2,1):64".parse().unwrap();
        assert_eq!(s.kind, FixtureKind::Ellipsoid { a: 2.0, c: 1.0 });
        assert_eq!(s.resolution, 64);
        assert_eq!("cone:16".parse::<FixtureSpec>().unwrap().kind, FixtureKind::Cone);
        assert!(matches!("torus:8".parse::<FixtureSpec>(), Err(ComplexError::UnknownFixture(_))));
        assert!(matches!("cone".parse::<FixtureSpec>(), Err(ComplexError::BadFixtureSpec(_))));
        assert!(matches!(fixture(FixtureKind::Cone, 4), Err(ComplexError::ResolutionTooLow { .. })));
    }

    #[test]
    fn disk_lies_in_plane() {
        let (k, f) = fixture(FixtureKind::Disk, 64).unwrap();
        for (p, [a, b]) in k.vertices().iter().zip(f.pairs()) {
            assert_eq!(p[0] + p[2], 0.0);
            assert_eq!(a + b, 0.0);
        }
    }

    #[test]
    fn cone_apex_value() {
        let (k, f) = fixture(FixtureKind::Cone, 64).unwrap();
        let apex = k.vertices().iter().position(|p| *p == [1.0, 0.0, 1.0]).unwrap();
        assert_eq!((f.phi1.values()[apex], f.phi2.values()[apex]), (1.0, 1.0));
        // (x + z) / 2 ranges over [0, 1]
        let half: Vec<f64> = f.pairs().map(|[x, z]| (x + z) / 2.0).collect();
        let lo = half.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = half.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(lo.abs() < 1e-15);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn sphere_extremum() {
        let n = 64;
        let (_, f) = fixture(FixtureKind::Sphere, n).unwrap();
        let lo = f.phi1.values().iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((lo + 1.0).abs() <= 2.0 / (n * n) as f64);
    }

    #[test]
    fn fixtures_have_expected_euler_characteristic() {
        for (kind, chi) in [
            (FixtureKind::Cone, 1),
            (FixtureKind::Disk, 1),
            (FixtureKind::Sphere, 2),
            (FixtureKind::Ellipsoid { a: 2.0, c: 1.0 }, 2),
        ] {
            let (k, _) = fixture(kind, 16).unwrap();
            assert_eq!(k.euler_characteristic(), chi, "{kind}");
        }
    }

    #[test]
    fn vertices_lie_on_quadric() {
        let (k, _) = fixture(FixtureKind::Ellipsoid { a: 2.0, c: 1.0 }, 32).unwrap();
        for p in k.vertices() {
            let r = p[0] * p[0] / 4.0 + p[1] * p[1] + p[2] * p[2];
            assert!((r - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn refinement_reduces_hausdorff_distance() {
        let dists: Vec<f64> = [16, 32, 64]
            .iter()
            .map(|&n| {
                let (k, _) = fixture(FixtureKind::Sphere, n).unwrap();
                hausdorff_to_surface(FixtureKind::Sphere, &k, 48).unwrap()
            })
            .collect();
        assert!(dists[0] > dists[1] && dists[1] > dists[2], "{dists:?}");
    }
}

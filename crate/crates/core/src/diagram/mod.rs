//! Persistence diagrams, the extended point metric, and bottleneck distance.

mod bottleneck;
mod matching;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bottleneck::{bottleneck_bruteforce, bottleneck_distance, candidate_costs, BRUTEFORCE_LIMIT};

#[derive(Debug, Error, PartialEq)]
pub enum DiagramError {
    #[error("diagram degrees differ ({0} vs {1})")]
    DegreeMismatch(usize, usize),
    #[error("point ({birth}, {death}) is not above the diagonal")]
    NotAboveDiagonal { birth: f64, death: f64 },
    #[error("point has zero multiplicity")]
    ZeroMultiplicity,
    #[error("brute force supports at most {limit} points, got {got}")]
    TooLarge { got: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub birth: f64,
    #[serde(with = "crate::json::extended_real")]
    pub death: f64,
    pub multiplicity: usize,
}

impl DiagramPoint {
    pub fn new(birth: f64, death: f64) -> Result<Self, DiagramError> {
        Self::with_multiplicity(birth, death, 1)
    }

    pub fn with_multiplicity(birth: f64, death: f64, multiplicity: usize) -> Result<Self, DiagramError> {
        if !(birth.is_finite() && birth < death) || death.is_nan() || death == f64::NEG_INFINITY {
            return Err(DiagramError::NotAboveDiagonal { birth, death });
        }
        if multiplicity == 0 {
            return Err(DiagramError::ZeroMultiplicity);
        }
        Ok(DiagramPoint { birth, death, multiplicity })
    }

    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }

    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }
}

/// A diagram point or the diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagramEntry {
    Point { birth: f64, death: f64 },
    Diagonal,
}

impl From<&DiagramPoint> for DiagramEntry {
    fn from(p: &DiagramPoint) -> Self {
        DiagramEntry::Point { birth: p.birth, death: p.death }
    }
}

/// Cost of matching a finite point to the diagonal.
pub(crate) fn diagonal_cost(birth: f64, death: f64) -> f64 {
    if death.is_infinite() {
        f64::INFINITY
    } else {
        0.5 * (death - birth)
    }
}

/// Finite-finite cost, written so that every result is bit-identical to some
/// entry of [`candidate_costs`].
pub(crate) fn finite_cost(u: f64, v: f64, u2: f64, v2: f64) -> f64 {
    let direct = (u - u2).abs().max((v - v2).abs());
    let via_diagonal = diagonal_cost(u, v).max(diagonal_cost(u2, v2));
    direct.min(via_diagonal)
}

/// The extended metric on points of a diagram plus the diagonal.
pub fn point_distance(p: &DiagramEntry, q: &DiagramEntry) -> f64 {
    use DiagramEntry::*;
    match (*p, *q) {
        (Diagonal, Diagonal) => 0.0,
        (Point { birth, death }, Diagonal) | (Diagonal, Point { birth, death }) => diagonal_cost(birth, death),
        (Point { birth: u, death: v }, Point { birth: u2, death: v2 }) => match (v.is_infinite(), v2.is_infinite()) {
            (false, false) => finite_cost(u, v, u2, v2),
            (true, true) => (u - u2).abs(),
            _ => f64::INFINITY,
        },
    }
}

/// A multiset of diagram points in one homology degree, kept sorted by
/// `(birth, death)` with equal points merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub degree: usize,
    pub points: Vec<DiagramPoint>,
}

impl PersistenceDiagram {
    pub fn empty(degree: usize) -> Self {
        PersistenceDiagram { degree, points: Vec::new() }
    }

    /// Builds a canonical diagram from `(birth, death)` pairs, dropping pairs
    /// on the diagonal.
    pub fn from_pairs(degree: usize, pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self, DiagramError> {
        let mut points = Vec::new();
        for (b, d) in pairs {
            if b == d {
                continue;
            }
            points.push(DiagramPoint::new(b, d)?);
        }
        Ok(Self::canonical(degree, points))
    }

    /// Sorts and merges equal points.
    pub fn canonical(degree: usize, mut points: Vec<DiagramPoint>) -> Self {
        points.sort_by(|a, b| a.birth.total_cmp(&b.birth).then(a.death.total_cmp(&b.death)));
        let mut merged: Vec<DiagramPoint> = Vec::with_capacity(points.len());
        for p in points {
            match merged.last_mut() {
                Some(last) if last.birth == p.birth && last.death == p.death => last.multiplicity += p.multiplicity,
                _ => merged.push(p),
            }
        }
        PersistenceDiagram { degree, points: merged }
    }

    /// Number of points counted with multiplicity.
    pub fn len(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points with multiplicity expanded, as `(birth, death)`.
    pub fn expanded(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .flat_map(|p| std::iter::repeat((p.birth, p.death)).take(p.multiplicity))
            .collect()
    }

    pub fn essential_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_essential()).map(|p| p.multiplicity).sum()
    }

    /// Points whose persistence exceeds `threshold`.
    pub fn significant(&self, threshold: f64) -> Vec<DiagramPoint> {
        self.points.iter().copied().filter(|p| p.persistence() > threshold).collect()
    }

    /// Every finite coordinate, births and deaths.
    pub fn finite_coordinates(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in &self.points {
            out.push(p.birth);
            if p.death.is_finite() {
                out.push(p.death);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let raw: PersistenceDiagram = serde_json::from_str(text)?;
        for p in &raw.points {
            DiagramPoint::with_multiplicity(p.birth, p.death, p.multiplicity)
                .map_err(<serde_json::Error as serde::de::Error>::custom)?;
        }
        Ok(Self::canonical(raw.degree, raw.points))
    }
}

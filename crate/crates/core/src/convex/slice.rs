//! Slices `phi*_{a,b}` of the classical matching distance.

use serde::{Deserialize, Serialize};

use super::{diagram_of, ConvexError};
use crate::complex::{BiFunction, MeshFunction, VertexFunction};
use crate::diagram::bottleneck_distance;
use crate::exec::Executor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub a: f64,
    pub b: f64,
}

impl SlicePoint {
    pub fn new(a: f64, b: f64) -> Result<Self, ConvexError> {
        if !(a > 0.0 && a < 1.0) || !b.is_finite() {
            return Err(ConvexError::SliceOutOfRange(a));
        }
        Ok(SlicePoint { a, b })
    }
}

/// `min(a, 1 - a) * max((phi1 - b) / a, (phi2 + b) / (1 - a))` vertexwise.
pub fn slice_function(f: &BiFunction, s: SlicePoint) -> Result<VertexFunction, ConvexError> {
    let SlicePoint { a, b } = SlicePoint::new(s.a, s.b)?;
    let m = a.min(1.0 - a);
    let values = f
        .pairs()
        .map(|[x, y]| m * ((x - b) / a).max((y + b) / (1.0 - a)))
        .collect();
    Ok(VertexFunction::from_vec_unchecked(values))
}

/// `na x nb` slices with `a` spanning `[0.1, 0.9]` and `b` spanning `[-1, 1]`.
pub fn slice_grid(na: usize, nb: usize) -> Result<Vec<SlicePoint>, ConvexError> {
    if na < 2 || nb < 2 {
        return Err(ConvexError::GridTooSmall { got: na.min(nb), min: 2 });
    }
    let a_values = crate::roots::uniform_grid(0.1, 0.9, na - 1);
    let b_values = crate::roots::uniform_grid(-1.0, 1.0, nb - 1);
    let mut out = Vec::with_capacity(na * nb);
    for &a in &a_values {
        for &b in &b_values {
            out.push(SlicePoint::new(a, b)?);
        }
    }
    Ok(out)
}

/// Largest slice distance on a grid, with the slice attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    #[serde(with = "crate::json::extended_real")]
    pub value: f64,
    pub witness: SlicePoint,
    pub slices: usize,
}

/// `max` over `grid` of `d_B(dgm_k(phi*_{a,b}), dgm_k(psi*_{a,b}))`. A sampled
/// lower bound on the classical matching distance; ties go to the first
/// slice in grid order.
pub fn matching_distance_lower_bound(
    f: &MeshFunction,
    h: &MeshFunction,
    k: usize,
    grid: &[SlicePoint],
    executor: Executor,
) -> Result<MatchResult, ConvexError> {
    if grid.is_empty() {
        return Err(ConvexError::GridTooSmall { got: 0, min: 1 });
    }
    let values = executor.try_map(grid, |&s| -> Result<f64, ConvexError> {
        let a = diagram_of(&f.complex, &slice_function(&f.function, s)?, k)?;
        let b = diagram_of(&h.complex, &slice_function(&h.function, s)?, k)?;
        Ok(bottleneck_distance(&a, &b)?)
    })?;
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    Ok(MatchResult { value: values[best], witness: grid[best], slices: grid.len() })
}

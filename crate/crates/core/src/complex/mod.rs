//! Triangulated 2-complexes with per-vertex data, and their lower-star
//! filtrations.

mod fixtures;
mod io;

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

pub use fixtures::{fixture, hausdorff_to_surface, FixtureKind, FixtureSpec, MIN_RESOLUTION};
pub use io::{load_complex, read_off, read_values, write_off, write_values};

pub type Point3 = [f64; 3];

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("OFF line {line}: {msg}")]
    Off { line: usize, msg: String },
    #[error("values line {line}: {msg}")]
    Values { line: usize, msg: String },
    #[error("simplex {simplex:?} references vertex {index}, but the complex has {vertex_count} vertices")]
    InvalidIndex { simplex: Vec<usize>, index: usize, vertex_count: usize },
    #[error("simplex {0:?} repeats a vertex")]
    DegenerateSimplex(Vec<usize>),
    #[error("simplex {0:?} appears more than once")]
    DuplicateSimplex(Vec<usize>),
    #[error("triangle {triangle:?} is missing its face {edge:?}")]
    NotClosed { triangle: [usize; 3], edge: [usize; 2] },
    #[error("vertex-count mismatch: mesh has {mesh} vertices, values have {values} rows")]
    VertexCountMismatch { mesh: usize, values: usize },
    #[error("non-finite value {value} at vertex {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("non-finite coordinate at vertex {0}")]
    NonFiniteVertex(usize),
    #[error("unknown fixture `{0}` (expected cone, disk, sphere or ellipsoid(a,c))")]
    UnknownFixture(String),
    #[error("fixture resolution {got} is below the minimum {min}")]
    ResolutionTooLow { got: usize, min: usize },
    #[error("malformed fixture spec `{0}` (expected NAME:RES)")]
    BadFixtureSpec(String),
}

/// A simplicial complex of dimension at most two.
///
/// Simplices are stored with sorted vertex indices; edges and triangles are
/// kept in lexicographic order, which makes equality structural.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialComplex {
    vertices: Vec<Point3>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
    triangle_edges: Vec<[usize; 3]>,
}

impl SimplicialComplex {
    /// Builds a complex from an explicit simplex list. Every edge of every
    /// triangle must be listed.
    pub fn new(
        vertices: Vec<Point3>,
        edges: Vec<[usize; 2]>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, ComplexError> {
        let n = vertices.len();
        if let Some(i) = vertices.iter().position(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(ComplexError::NonFiniteVertex(i));
        }
        let mut edges: Vec<[usize; 2]> = edges
            .into_iter()
            .map(|e| normalize(&e, n).map(|v| [v[0], v[1]]))
            .collect::<Result<_, _>>()?;
        let mut triangles: Vec<[usize; 3]> = triangles
            .into_iter()
            .map(|t| normalize(&t, n).map(|v| [v[0], v[1], v[2]]))
            .collect::<Result<_, _>>()?;
        edges.sort_unstable();
        triangles.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateSimplex(w[0].to_vec()));
        }
        if let Some(w) = triangles.windows(2).find(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateSimplex(w[0].to_vec()));
        }
        let lookup: HashMap<[usize; 2], usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut triangle_edges = Vec::with_capacity(triangles.len());
        for &t @ [a, b, c] in &triangles {
            let mut ids = [0; 3];
            for (slot, edge) in ids.iter_mut().zip([[a, b], [a, c], [b, c]]) {
                *slot = *lookup
                    .get(&edge)
                    .ok_or(ComplexError::NotClosed { triangle: t, edge })?;
            }
            triangle_edges.push(ids);
        }
        Ok(SimplicialComplex { vertices, edges, triangles, triangle_edges })
    }

    /// Builds a complex from triangles, adding every triangle edge plus the
    /// given extra edges.
    pub fn from_triangles(
        vertices: Vec<Point3>,
        triangles: Vec<[usize; 3]>,
        extra_edges: Vec<[usize; 2]>,
    ) -> Result<Self, ComplexError> {
        let n = vertices.len();
        let mut edges = Vec::with_capacity(3 * triangles.len() + extra_edges.len());
        for t in &triangles {
            let v = normalize(t, n)?;
            edges.extend([[v[0], v[1]], [v[0], v[2]], [v[1], v[2]]]);
        }
        for e in &extra_edges {
            let v = normalize(e, n)?;
            edges.push([v[0], v[1]]);
        }
        edges.sort_unstable();
        edges.dedup();
        Self::new(vertices, edges, triangles)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Edge ids of the three faces of each triangle.
    pub fn triangle_edges(&self) -> &[[usize; 3]] {
        &self.triangle_edges
    }

    pub fn simplex_count(&self, dim: usize) -> usize {
        match dim {
            0 => self.vertices.len(),
            1 => self.edges.len(),
            2 => self.triangles.len(),
            _ => 0,
        }
    }

    pub fn dimension(&self) -> usize {
        if !self.triangles.is_empty() {
            2
        } else if !self.edges.is_empty() {
            1
        } else {
            0
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Vertex indices of a simplex identified by dimension and position.
    pub fn simplex_vertices(&self, dim: usize, index: usize) -> Vec<usize> {
        match dim {
            0 => vec![index],
            1 => self.edges[index].to_vec(),
            _ => self.triangles[index].to_vec(),
        }
    }
}

fn normalize(simplex: &[usize], vertex_count: usize) -> Result<Vec<usize>, ComplexError> {
    if let Some(&bad) = simplex.iter().find(|&&i| i >= vertex_count) {
        return Err(ComplexError::InvalidIndex {
            simplex: simplex.to_vec(),
            index: bad,
            vertex_count,
        });
    }
    let mut v = simplex.to_vec();
    v.sort_unstable();
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(ComplexError::DegenerateSimplex(simplex.to_vec()));
    }
    Ok(v)
}

/// Finite real values, one per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction(Vec<f64>);

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Result<Self, ComplexError> {
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(ComplexError::NonFinite { index, value });
        }
        Ok(VertexFunction(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `c` to every value.
    pub fn shifted(&self, c: f64) -> Self {
        VertexFunction(self.0.iter().map(|v| v + c).collect())
    }

    pub fn sup_distance(&self, other: &VertexFunction) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        VertexFunction(values)
    }
}

/// A pair of vertex functions on the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct BiFunction {
    pub phi1: VertexFunction,
    pub phi2: VertexFunction,
}

impl BiFunction {
    pub fn new(phi1: VertexFunction, phi2: VertexFunction) -> Result<Self, ComplexError> {
        if phi1.len() != phi2.len() {
            return Err(ComplexError::VertexCountMismatch { mesh: phi1.len(), values: phi2.len() });
        }
        Ok(BiFunction { phi1, phi2 })
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Result<Self, ComplexError> {
        BiFunction::new(
            VertexFunction::new(pairs.iter().map(|p| p[0]).collect())?,
            VertexFunction::new(pairs.iter().map(|p| p[1]).collect())?,
        )
    }

    pub fn len(&self) -> usize {
        self.phi1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi1.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        self.phi1.values().iter().zip(self.phi2.values()).map(|(&a, &b)| [a, b])
    }

    /// `max(|phi1 - psi1|, |phi2 - psi2|)` over vertices.
    pub fn sup_distance(&self, other: &BiFunction) -> f64 {
        self.phi1.sup_distance(&other.phi1).max(self.phi2.sup_distance(&other.phi2))
    }
}

/// A bi-function together with the complex it lives on.
#[derive(Debug, Clone)]
pub struct MeshFunction {
    pub complex: Arc<SimplicialComplex>,
    pub function: BiFunction,
}

impl MeshFunction {
    pub fn new(complex: impl Into<Arc<SimplicialComplex>>, function: BiFunction) -> Result<Self, ComplexError> {
        let complex = complex.into();
        if complex.vertex_count() != function.len() {
            return Err(ComplexError::VertexCountMismatch {
                mesh: complex.vertex_count(),
                values: function.len(),
            });
        }
        Ok(MeshFunction { complex, function })
    }

    pub fn with_function(&self, function: BiFunction) -> Result<Self, ComplexError> {
        MeshFunction::new(self.complex.clone(), function)
    }
}

/// A simplex in a filtration, addressed by dimension and its position in the
/// complex's simplex list of that dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilteredSimplex {
    pub dim: usize,
    pub index: usize,
    pub value: f64,
}

/// Lower-star filtration of a complex.
///
/// Vertices are ranked by `(value, index)`. A simplex enters at the value of
/// its highest-ranked vertex; the total order is `(value, dimension, vertex
/// ranks in descending order)`, which is a linear extension of the face order.
#[derive(Debug, Clone)]
pub struct Filtration<'a> {
    complex: &'a SimplicialComplex,
    vertex_values: Vec<f64>,
    rank: Vec<u32>,
    order: [Vec<usize>; 3],
    included: usize,
}

impl<'a> Filtration<'a> {
    pub fn complex(&self) -> &'a SimplicialComplex {
        self.complex
    }

    /// Highest dimension included in this filtration.
    pub fn max_dim(&self) -> usize {
        if !self.order[2].is_empty() {
            2
        } else if !self.order[1].is_empty() {
            1
        } else {
            0
        }
    }

    /// Whether every `dim`-simplex of the complex is in the filtration.
    pub fn covers(&self, dim: usize) -> bool {
        self.included >= dim || self.complex.dimension() < dim
    }

    /// Complex indices of the `dim`-simplices in filtration order.
    pub fn order(&self, dim: usize) -> &[usize] {
        &self.order[dim]
    }

    pub fn vertex_rank(&self, v: usize) -> u32 {
        self.rank[v]
    }

    pub fn value(&self, dim: usize, index: usize) -> f64 {
        self.vertex_values[self.top_vertex(dim, index)]
    }

    fn top_vertex(&self, dim: usize, index: usize) -> usize {
        match dim {
            0 => index,
            1 => {
                let [a, b] = self.complex.edges[index];
                if self.rank[a] > self.rank[b] { a } else { b }
            }
            _ => {
                let t = self.complex.triangles[index];
                *t.iter().max_by_key(|&&v| self.rank[v]).expect("triangle has vertices")
            }
        }
    }

    fn descending_ranks(&self, dim: usize, index: usize) -> [u32; 3] {
        let mut r = [0u32; 3];
        for (slot, v) in r.iter_mut().zip(self.complex.simplex_vertices(dim, index)) {
            *slot = self.rank[v] + 1;
        }
        r.sort_unstable_by(|a, b| b.cmp(a));
        r
    }

    /// All simplices in the total filtration order.
    pub fn simplices(&self) -> Vec<FilteredSimplex> {
        let mut all: Vec<(f64, usize, [u32; 3], usize)> = Vec::new();
        for dim in 0..3 {
            for &index in &self.order[dim] {
                all.push((self.value(dim, index), dim, self.descending_ranks(dim, index), index));
            }
        }
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        all.into_iter()
            .map(|(value, dim, _, index)| FilteredSimplex { dim, index, value })
            .collect()
    }
}

/// Lower-star filtration of `f` on every simplex of `complex`.
pub fn lower_star_filtration<'a>(
    complex: &'a SimplicialComplex,
    f: &VertexFunction,
) -> Result<Filtration<'a>, ComplexError> {
    lower_star_filtration_to_dim(complex, f, 2)
}

/// Lower-star filtration restricted to simplices of dimension `<= max_dim`.
pub fn lower_star_filtration_to_dim<'a>(
    complex: &'a SimplicialComplex,
    f: &VertexFunction,
    max_dim: usize,
) -> Result<Filtration<'a>, ComplexError> {
    if f.len() != complex.vertex_count() {
        return Err(ComplexError::VertexCountMismatch { mesh: complex.vertex_count(), values: f.len() });
    }
    let values = f.values();
    let mut by_value: Vec<usize> = (0..values.len()).collect();
    by_value.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0u32; values.len()];
    for (r, &v) in by_value.iter().enumerate() {
        rank[v] = r as u32;
    }

    let mut edge_order = Vec::new();
    if max_dim >= 1 {
        let mut keyed: Vec<(u64, usize)> = complex
            .edges
            .iter()
            .enumerate()
            .map(|(i, &[a, b])| {
                let (hi, lo) = if rank[a] > rank[b] { (rank[a], rank[b]) } else { (rank[b], rank[a]) };
                (((hi as u64) << 32) | lo as u64, i)
            })
            .collect();
        keyed.sort_unstable();
        edge_order = keyed.into_iter().map(|(_, i)| i).collect();
    }

    let mut triangle_order = Vec::new();
    if max_dim >= 2 {
        let mut keyed: Vec<(u128, usize)> = complex
            .triangles
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut r = [rank[t[0]], rank[t[1]], rank[t[2]]];
                r.sort_unstable_by(|a, b| b.cmp(a));
                let key = ((r[0] as u128) << 64) | ((r[1] as u128) << 32) | r[2] as u128;
                (key, i)
            })
            .collect();
        keyed.sort_unstable();
        triangle_order = keyed.into_iter().map(|(_, i)| i).collect();
    }

    Ok(Filtration {
        complex,
        vertex_values: values.to_vec(),
        rank,
        order: [by_value, edge_order, triangle_order],
        included: max_dim,
    })
}

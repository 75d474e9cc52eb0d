//! OFF meshes and two-column value files.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{BiFunction, ComplexError, SimplicialComplex};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ComplexError + '_ {
    move |source| ComplexError::Io { path: path.to_path_buf(), source }
}

/// Parses an ASCII OFF triangle mesh.
pub fn parse_off(text: &str) -> Result<SimplicialComplex, ComplexError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let off = |line: usize, msg: &str| ComplexError::Off { line, msg: msg.to_string() };

    let (line, header) = lines.next().ok_or_else(|| off(1, "empty file"))?;
    let mut header_rest = header.strip_prefix("OFF").ok_or_else(|| off(line, "missing `OFF` header"))?.trim();
    let counts_line;
    if header_rest.is_empty() {
        let (l, c) = lines.next().ok_or_else(|| off(line, "missing counts line"))?;
        counts_line = l;
        header_rest = c;
    } else {
        counts_line = line;
    }
    let counts: Vec<usize> = header_rest
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| off(counts_line, "counts must be integers")))
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(off(counts_line, "counts line needs vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, text) = lines.next().ok_or_else(|| off(counts_line, "fewer vertex lines than declared"))?;
        let xs: Vec<f64> = text
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|_| off(l, "vertex coordinate is not a number")))
            .collect::<Result<_, _>>()?;
        if xs.len() != 3 {
            return Err(off(l, "vertex line must have three coordinates"));
        }
        vertices.push([xs[0], xs[1], xs[2]]);
    }

    let mut triangles = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, text) = lines.next().ok_or_else(|| off(counts_line, "fewer face lines than declared"))?;
        let idx: Vec<usize> = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| off(l, "face entry is not a vertex index")))
            .collect::<Result<_, _>>()?;
        if idx.first() != Some(&3) || idx.len() != 4 {
            return Err(off(l, "face line must be `3 a b c`"));
        }
        triangles.push([idx[1], idx[2], idx[3]]);
    }
    if let Some((l, _)) = lines.next() {
        return Err(off(l, "trailing content after the declared faces"));
    }
    SimplicialComplex::from_triangles(vertices, triangles, Vec::new())
}

pub fn read_off(path: &Path) -> Result<SimplicialComplex, ComplexError> {
    parse_off(&fs::read_to_string(path).map_err(io_err(path))?)
}

/// Writes the triangles of `complex` as OFF. Coordinates use the shortest
/// representation that parses back to the same `f64`.
pub fn write_off(complex: &SimplicialComplex, path: &Path) -> Result<(), ComplexError> {
    let mut out = String::new();
    out.push_str("OFF\n");
    out.push_str(&format!("{} {} {}\n", complex.vertex_count(), complex.triangles().len(), complex.edges().len()));
    for [x, y, z] in complex.vertices() {
        out.push_str(&format!("{x:?} {y:?} {z:?}\n"));
    }
    for [a, b, c] in complex.triangles() {
        out.push_str(&format!("3 {a} {b} {c}\n"));
    }
    let mut file = fs::File::create(path).map_err(io_err(path))?;
    file.write_all(out.as_bytes()).map_err(io_err(path))
}

/// Parses headerless two-column CSV, row `i` holding `(phi1, phi2)` of vertex `i`.
pub fn parse_values<R: std::io::Read>(reader: R) -> Result<BiFunction, ComplexError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let mut pairs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| ComplexError::Values { line, msg: e.to_string() })?;
        if rec.len() != 2 {
            return Err(ComplexError::Values { line, msg: format!("expected 2 columns, found {}", rec.len()) });
        }
        let mut row = [0.0; 2];
        for (slot, field) in row.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse()
                .map_err(|_| ComplexError::Values { line, msg: format!("`{field}` is not a number") })?;
        }
        pairs.push(row);
    }
    BiFunction::from_pairs(&pairs)
}

pub fn read_values(path: &Path) -> Result<BiFunction, ComplexError> {
    parse_values(fs::File::open(path).map_err(io_err(path))?)
}

pub fn write_values(f: &BiFunction, path: &Path) -> Result<(), ComplexError> {
    let mut out = String::new();
    for [a, b] in f.pairs() {
        out.push_str(&format!("{a:?},{b:?}\n"));
    }
    fs::write(path, out).map_err(io_err(path))
}

/// Loads a mesh and its aligned two-column values.
pub fn load_complex(path: &Path, values_path: &Path) -> Result<(SimplicialComplex, BiFunction), ComplexError> {
    let complex = read_off(path)?;
    let f = read_values(values_path)?;
    if f.len() != complex.vertex_count() {
        return Err(ComplexError::VertexCountMismatch { mesh: complex.vertex_count(), values: f.len() });
    }
    Ok((complex, f))
}

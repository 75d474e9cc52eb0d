//! Persistent homology of lower-star filtrations over Z/2.
//!
//! Degree 0 uses union-find with the elder rule. Degrees 1 and 2 reduce
//! only the triangle columns: negative edges are already known from the
//! union-find pass, so by clearing their columns never need reducing.
//! [`reduce_boundary_matrix`] is the plain full reduction, kept as an oracle.

use thiserror::Error;

use crate::complex::Filtration;
use crate::diagram::{DiagramError, PersistenceDiagram};

#[derive(Debug, Error, PartialEq)]
pub enum PersistenceError {
    #[error("unsupported homology degree {0} (expected 0, 1 or 2)")]
    UnsupportedDegree(usize),
    #[error("degree {degree} needs the filtration up to dimension {need}")]
    FiltrationTooShort { degree: usize, need: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexId {
    pub dim: usize,
    pub index: usize,
}

/// Birth/death simplex pairs and unpaired births. The homology degree of an
/// essential class is the dimension of its birth simplex.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistencePairing {
    pub pairs: Vec<(SimplexId, SimplexId)>,
    pub essentials: Vec<SimplexId>,
}

impl PersistencePairing {
    pub fn essential_count(&self, degree: usize) -> usize {
        self.essentials.iter().filter(|s| s.dim == degree).count()
    }

    /// Diagram of `degree` with coordinates read from `filtration`.
    pub fn diagram(&self, filtration: &Filtration, degree: usize) -> Result<PersistenceDiagram, DiagramError> {
        let value = |s: &SimplexId| filtration.value(s.dim, s.index);
        let finite = self.pairs.iter().filter(|(b, _)| b.dim == degree).map(|(b, d)| (value(b), value(d)));
        let essential = self.essentials.iter().filter(|b| b.dim == degree).map(|b| (value(b), f64::INFINITY));
        PersistenceDiagram::from_pairs(degree, finite.chain(essential))
    }

    fn sort(&mut self) {
        self.pairs.sort_unstable();
        self.essentials.sort_unstable();
    }
}

struct UnionFind {
    parent: Vec<u32>,
    // filtration position of the oldest vertex in each root's component
    birth: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect(), birth: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

/// Union-find pass over vertices and edges. Returns vertex/edge pairs, the
/// essential vertices and the positive (cycle-creating) edges.
fn components(filtration: &Filtration) -> (Vec<(SimplexId, SimplexId)>, Vec<SimplexId>, Vec<bool>) {
    let complex = filtration.complex();
    let n = complex.vertex_count();
    let vorder = filtration.order(0);
    // union-find nodes are filtration positions, so the elder has the smaller id
    let mut pos = vec![0u32; n];
    for (p, &v) in vorder.iter().enumerate() {
        pos[v] = p as u32;
    }
    let mut uf = UnionFind::new(n);
    let mut pairs = Vec::new();
    let mut positive = vec![false; complex.edges().len()];
    for &e in filtration.order(1) {
        let [a, b] = complex.edges()[e];
        let ra = uf.find(pos[a]);
        let rb = uf.find(pos[b]);
        if ra == rb {
            positive[e] = true;
            continue;
        }
        let (elder, younger) = if uf.birth[ra as usize] < uf.birth[rb as usize] { (ra, rb) } else { (rb, ra) };
        let dying = vorder[uf.birth[younger as usize] as usize];
        pairs.push((SimplexId { dim: 0, index: dying }, SimplexId { dim: 1, index: e }));
        uf.parent[younger as usize] = elder;
    }
    let mut essentials = Vec::new();
    for p in 0..n as u32 {
        if uf.find(p) == p {
            essentials.push(SimplexId { dim: 0, index: vorder[uf.birth[p as usize] as usize] });
        }
    }
    (pairs, essentials, positive)
}

/// In-place symmetric difference of two sorted index lists.
fn add_column(target: &mut Vec<u32>, source: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&target[i..]);
    scratch.extend_from_slice(&source[j..]);
    std::mem::swap(target, scratch);
}

/// Reduces columns given in filtration order. Rows are positions in a row
/// order; returns, per column, the pivot row if the column survives.
fn reduce_columns(columns: Vec<Vec<u32>>, n_rows: usize) -> Vec<Option<u32>> {
    let mut pivot_owner: Vec<u32> = vec![u32::MAX; n_rows];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(columns.len());
    let mut lows = Vec::with_capacity(columns.len());
    let mut scratch = Vec::new();
    for (j, mut col) in columns.into_iter().enumerate() {
        while let Some(&low) = col.last() {
            let owner = pivot_owner[low as usize];
            if owner == u32::MAX {
                break;
            }
            add_column(&mut col, &reduced[owner as usize], &mut scratch);
        }
        let low = col.last().copied();
        if let Some(l) = low {
            pivot_owner[l as usize] = j as u32;
        }
        reduced.push(col);
        lows.push(low);
    }
    lows
}

/// Full pairing of the filtration using union-find for degree 0 and a
/// cleared triangle reduction for degrees 1 and 2.
pub fn pairing(filtration: &Filtration) -> PersistencePairing {
    let complex = filtration.complex();
    let (mut pairs, mut essentials, positive) = components(filtration);
    let mut edge_pos = vec![0u32; complex.edges().len()];
    for (p, &e) in filtration.order(1).iter().enumerate() {
        edge_pos[e] = p as u32;
    }
    let eorder = filtration.order(1);
    let torder = filtration.order(2);
    let columns: Vec<Vec<u32>> = torder
        .iter()
        .map(|&t| {
            // negative edges never carry a pivot of a reduced triangle column,
            // but they still take part in additions, so they are kept
            let mut c: Vec<u32> = complex.triangle_edges()[t].iter().map(|&e| edge_pos[e]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let lows = reduce_columns(columns, eorder.len());
    let mut killed = vec![false; eorder.len()];
    for (j, low) in lows.iter().enumerate() {
        match low {
            Some(l) => {
                killed[*l as usize] = true;
                pairs.push((SimplexId { dim: 1, index: eorder[*l as usize] }, SimplexId { dim: 2, index: torder[j] }));
            }
            None => essentials.push(SimplexId { dim: 2, index: torder[j] }),
        }
    }
    for (p, &e) in eorder.iter().enumerate() {
        if positive[e] && !killed[p] {
            essentials.push(SimplexId { dim: 1, index: e });
        }
    }
    let mut out = PersistencePairing { pairs, essentials };
    out.sort();
    out
}

/// Standard column reduction of the whole boundary matrix with clearing,
/// processing the top dimension first.
pub fn reduce_boundary_matrix(filtration: &Filtration) -> PersistencePairing {
    let complex = filtration.complex();
    let order = filtration.simplices();
    let mut position: [Vec<u32>; 3] = [
        vec![0; complex.vertex_count()],
        vec![0; complex.edges().len()],
        vec![0; complex.triangles().len()],
    ];
    for (p, s) in order.iter().enumerate() {
        position[s.dim][s.index] = p as u32;
    }
    let boundary = |dim: usize, index: usize| -> Vec<u32> {
        let mut c: Vec<u32> = match dim {
            0 => Vec::new(),
            1 => complex.edges()[index].iter().map(|&v| position[0][v]).collect(),
            _ => complex.triangle_edges()[index].iter().map(|&e| position[1][e]).collect(),
        };
        c.sort_unstable();
        c
    };
    let n = order.len();
    let mut pivot_owner = vec![u32::MAX; n];
    let mut cleared = vec![false; n];
    let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut scratch = Vec::new();
    let mut pairs = Vec::new();
    for dim in (1..=2).rev() {
        for j in 0..n {
            if order[j].dim != dim || cleared[j] {
                continue;
            }
            let mut col = boundary(dim, order[j].index);
            while let Some(&low) = col.last() {
                let owner = pivot_owner[low as usize];
                if owner == u32::MAX {
                    break;
                }
                add_column(&mut col, &reduced[owner as usize], &mut scratch);
            }
            if let Some(&low) = col.last() {
                pivot_owner[low as usize] = j as u32;
                cleared[low as usize] = true;
                let b = order[low as usize];
                pairs.push((SimplexId { dim: b.dim, index: b.index }, SimplexId { dim, index: order[j].index }));
            }
            reduced[j] = col;
        }
    }
    let mut essentials = Vec::new();
    for (p, s) in order.iter().enumerate() {
        let is_death = s.dim > 0 && reduced[p].last().is_some();
        if !cleared[p] && !is_death {
            essentials.push(SimplexId { dim: s.dim, index: s.index });
        }
    }
    let mut out = PersistencePairing { pairs, essentials };
    out.sort();
    out
}

/// `dgm_k` of a lower-star filtration. Degree 0 only needs the filtration up
/// to edges; higher degrees need triangles.
pub fn compute_persistence(filtration: &Filtration, k: usize) -> Result<PersistenceDiagram, PersistenceError> {
    if k > 2 {
        return Err(PersistenceError::UnsupportedDegree(k));
    }
    let need = (k + 1).min(2);
    if !filtration.covers(need) {
        return Err(PersistenceError::FiltrationTooShort { degree: k, need });
    }
    if k == 0 {
        let (pairs, essentials, _) = components(filtration);
        let p = PersistencePairing { pairs, essentials };
        return Ok(p.diagram(filtration, 0)?);
    }
    Ok(pairing(filtration).diagram(filtration, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{
        fixture, lower_star_filtration, lower_star_filtration_to_dim, FixtureKind, SimplicialComplex, VertexFunction,
    };
    use proptest::prelude::*;

    fn dgm(k: &SimplicialComplex, values: Vec<f64>, degree: usize) -> PersistenceDiagram {
        let f = VertexFunction::new(values).unwrap();
        compute_persistence(&lower_star_filtration(k, &f).unwrap(), degree).unwrap()
    }

    #[test]
    fn single_vertex() {
        let k = SimplicialComplex::new(vec![[0.0; 3]], vec![], vec![]).unwrap();
        let d = dgm(&k, vec![2.5], 0);
        assert_eq!(d.expanded(), vec![(2.5, f64::INFINITY)]);
    }

    #[test]
    fn rejects_bad_degree() {
        let k = SimplicialComplex::new(vec![[0.0; 3]], vec![], vec![]).unwrap();
        let f = VertexFunction::new(vec![0.0]).unwrap();
        let filt = lower_star_filtration(&k, &f).unwrap();
        assert_eq!(compute_persistence(&filt, 3), Err(PersistenceError::UnsupportedDegree(3)));
    }

    #[test]
    fn truncated_filtration_is_rejected_for_higher_degrees() {
        let (k, f) = fixture(FixtureKind::Disk, 8).unwrap();
        let filt = lower_star_filtration_to_dim(&k, &f.phi1, 1).unwrap();
        assert!(compute_persistence(&filt, 0).is_ok());
        assert!(matches!(compute_persistence(&filt, 1), Err(PersistenceError::FiltrationTooShort { .. })));
    }

    #[test]
    fn circle_has_one_loop() {
        // hollow triangle: one H1 essential class born at the last edge
        let k = SimplicialComplex::new(vec![[0.0; 3]; 3], vec![[0, 1], [1, 2], [0, 2]], vec![]).unwrap();
        let d1 = dgm(&k, vec![0.0, 1.0, 2.0], 1);
        assert_eq!(d1.expanded(), vec![(2.0, f64::INFINITY)]);
        let d0 = dgm(&k, vec![0.0, 1.0, 2.0], 0);
        assert_eq!(d0.expanded(), vec![(0.0, f64::INFINITY)]);
    }

    #[test]
    fn two_minima_merge_by_elder_rule() {
        // path 0 - 1 - 2 with values 0, 3, 1: component of vertex 2 dies at 3
        let k = SimplicialComplex::new(vec![[0.0; 3]; 3], vec![[0, 1], [1, 2]], vec![]).unwrap();
        let d = dgm(&k, vec![0.0, 3.0, 1.0], 0);
        assert_eq!(d.expanded(), vec![(0.0, f64::INFINITY), (1.0, 3.0)]);
    }

    #[test]
    fn cone_degree_one_loop() {
        let (k, f) = fixture(FixtureKind::Cone, 64).unwrap();
        let half: Vec<f64> = f.pairs().map(|[x, z]| 0.5 * x + 0.5 * z).collect();
        let d = dgm(&k, half, 1);
        let big = d.significant(0.05);
        assert_eq!(big.len(), 1, "{d:?}");
        assert!(big[0].birth.abs() < 0.05 && (big[0].death - 1.0).abs() < 0.05);
    }

    #[test]
    fn max_slice_degree_zero() {
        let (disk, fd) = fixture(FixtureKind::Disk, 64).unwrap();
        let d = dgm(&disk, fd.pairs().map(|[x, z]| x.max(z)).collect(), 0);
        let big = d.significant(0.05);
        assert_eq!(big.len(), 1);
        assert!(big[0].birth.abs() < 0.05 && big[0].death.is_infinite());

        let (cone, fc) = fixture(FixtureKind::Cone, 64).unwrap();
        let d = dgm(&cone, fc.pairs().map(|[x, z]| x.max(z)).collect(), 0);
        let big = d.significant(0.05);
        assert_eq!(big.len(), 2, "{d:?}");
        assert!(big.iter().all(|p| p.birth.abs() < 0.05));
        assert!(big.iter().any(|p| p.death.is_infinite()));
        assert!(big.iter().any(|p| (p.death - 1.0).abs() < 0.05));
    }

    #[test]
    fn euler_consistency_on_fixtures() {
        for kind in [FixtureKind::Cone, FixtureKind::Disk, FixtureKind::Sphere, FixtureKind::Ellipsoid { a: 2.0, c: 1.0 }]
        {
            let (k, f) = fixture(kind, 16).unwrap();
            let filt = lower_star_filtration(&k, &f.phi1).unwrap();
            let p = pairing(&filt);
            let chi = p.essential_count(0) as i64 - p.essential_count(1) as i64 + p.essential_count(2) as i64;
            assert_eq!(chi, k.euler_characteristic(), "{kind}");
            assert_eq!(p, reduce_boundary_matrix(&filt), "{kind}");
        }
    }

    #[test]
    fn sphere_betti_numbers() {
        let (k, f) = fixture(FixtureKind::Sphere, 16).unwrap();
        let filt = lower_star_filtration(&k, &f.phi2).unwrap();
        let p = pairing(&filt);
        assert_eq!((p.essential_count(0), p.essential_count(1), p.essential_count(2)), (1, 0, 1));
    }

    #[test]
    fn coordinates_are_vertex_values() {
        let (k, f) = fixture(FixtureKind::Cone, 16).unwrap();
        let vals: Vec<f64> = f.pairs().map(|[x, z]| 0.3 * x + 0.7 * z).collect();
        for degree in 0..=2 {
            let d = dgm(&k, vals.clone(), degree);
            for c in d.finite_coordinates() {
                assert!(vals.contains(&c));
            }
        }
    }

    #[test]
    fn constant_shift_shifts_diagram() {
        // dyadic values so the shift is exact
        let (k, f) = fixture(FixtureKind::Sphere, 16).unwrap();
        let vals: Vec<f64> = f.phi1.values().iter().map(|x| (x * 1024.0).round() / 1024.0).collect();
        for degree in 0..=2 {
            let a = dgm(&k, vals.clone(), degree);
            let b = dgm(&k, vals.iter().map(|v| v + 0.25).collect(), degree);
            let shifted: Vec<(f64, f64)> = a.expanded().into_iter().map(|(x, y)| (x + 0.25, y + 0.25)).collect();
            assert_eq!(b.expanded(), shifted);
        }
    }

    fn random_complex() -> impl Strategy<Value = (SimplicialComplex, Vec<f64>)> {
        (3usize..25, prop::collection::vec((0usize..25, 0usize..25, 0usize..25), 0..40), any::<u64>()).prop_map(
            |(n, tris, seed)| {
                let mut triangles = Vec::new();
                let mut edges = Vec::new();
                for (a, b, c) in tris {
                    let (a, b, c) = (a % n, b % n, c % n);
                    if a != b && b != c && a != c {
                        let mut t = [a, b, c];
                        t.sort_unstable();
                        if !triangles.contains(&t) {
                            triangles.push(t);
                        }
                    } else if a != b {
                        edges.push([a.min(b), a.max(b)]);
                    }
                }
                triangles.truncate(40);
                let k = SimplicialComplex::from_triangles(vec![[0.0; 3]; n], triangles, edges).unwrap();
                // few distinct values so that ties exercise the tie-break
                let mut s = seed;
                let values = (0..n)
                    .map(|_| {
                        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        ((s >> 33) % 7) as f64
                    })
                    .collect();
                (k, values)
            },
        )
    }

    proptest! {
        #[test]
        fn union_find_matches_reduction((k, values) in random_complex()) {
            prop_assume!(k.vertex_count() + k.edges().len() + k.triangles().len() <= 200);
            let f = VertexFunction::new(values).unwrap();
            let filt = lower_star_filtration(&k, &f).unwrap();
            let oracle = reduce_boundary_matrix(&filt);
            let fast = compute_persistence(&filt, 0).unwrap();
            prop_assert_eq!(fast, oracle.diagram(&filt, 0).unwrap());
            prop_assert_eq!(pairing(&filt), oracle);
        }
    }
}

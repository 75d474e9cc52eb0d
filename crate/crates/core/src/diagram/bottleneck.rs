use super::matching::maximum_matching;
use super::{diagonal_cost, finite_cost, DiagramError, PersistenceDiagram};

/// Largest total point count accepted by [`bottleneck_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 12;

fn check_degrees(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<(), DiagramError> {
    if d1.degree != d2.degree {
        return Err(DiagramError::DegreeMismatch(d1.degree, d2.degree));
    }
    Ok(())
}

fn costs_of(coords: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(coords.len() * coords.len());
    for (i, &a) in coords.iter().enumerate() {
        for &b in &coords[i..] {
            let d = (a - b).abs();
            out.push(d);
            out.push(0.5 * d);
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Every `c |w0 - w1|` with `c` in `{1/2, 1}` over finite coordinates of
/// both diagrams, sorted and deduplicated.
pub fn candidate_costs(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Vec<f64> {
    let mut coords = d1.finite_coordinates();
    coords.extend(d2.finite_coordinates());
    costs_of(&coords)
}

type Split = (Vec<(f64, f64)>, Vec<f64>);

fn split(d: &PersistenceDiagram) -> Split {
    let mut finite = Vec::new();
    let mut essential = Vec::new();
    for (b, dd) in d.expanded() {
        if dd.is_infinite() {
            essential.push(b);
        } else {
            finite.push((b, dd));
        }
    }
    (finite, essential)
}

fn feasible(p: &[(f64, f64)], q: &[(f64, f64)], delta: f64) -> bool {
    let (n1, n2) = (p.len(), q.len());
    // left: p then diagonal copies of q; right: q then diagonal copies of p
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(n1 + n2);
    for (i, &(u, v)) in p.iter().enumerate() {
        let mut row: Vec<usize> = q
            .iter()
            .enumerate()
            .filter(|(_, &(u2, v2))| finite_cost(u, v, u2, v2) <= delta)
            .map(|(j, _)| j)
            .collect();
        if diagonal_cost(u, v) <= delta {
            row.push(n2 + i);
        }
        if row.is_empty() {
            return false;
        }
        adj.push(row);
    }
    for (j, &(u, v)) in q.iter().enumerate() {
        let mut row = Vec::with_capacity(n1 + 1);
        if diagonal_cost(u, v) <= delta {
            row.push(j);
        }
        row.extend(n2..n2 + n1);
        adj.push(row);
    }
    maximum_matching(&adj, n1 + n2) == n1 + n2
}

fn finite_bottleneck(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    if p.is_empty() && q.is_empty() {
        return 0.0;
    }
    let mut coords = Vec::with_capacity(2 * (p.len() + q.len()));
    for &(u, v) in p.iter().chain(q) {
        coords.push(u);
        coords.push(v);
    }
    let cands = costs_of(&coords);
    // the all-to-diagonal matching is always feasible at the largest candidate
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(p, q, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo]
}

fn essential_bottleneck(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Bottleneck distance under the extended metric, `+inf` when the numbers of
/// essential points differ.
pub fn bottleneck_distance(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64, DiagramError> {
    check_degrees(d1, d2)?;
    let (f1, e1) = split(d1);
    let (f2, e2) = split(d2);
    let ess = essential_bottleneck(e1, e2);
    if ess.is_infinite() {
        return Ok(ess);
    }
    Ok(finite_bottleneck(&f1, &f2).max(ess))
}

/// Exhaustive search over all partial bijections. Test oracle.
pub fn bottleneck_bruteforce(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> Result<f64, DiagramError> {
    check_degrees(d1, d2)?;
    let p = d1.expanded();
    let q = d2.expanded();
    let total = p.len() + q.len();
    if total > BRUTEFORCE_LIMIT {
        return Err(DiagramError::TooLarge { got: total, limit: BRUTEFORCE_LIMIT });
    }
    let mut used = vec![false; q.len()];
    let mut best = f64::INFINITY;
    search(&p, &q, 0, &mut used, 0.0, &mut best);
    Ok(best)
}

fn pair_cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    use super::{point_distance, DiagramEntry::Point};
    point_distance(&Point { birth: a.0, death: a.1 }, &Point { birth: b.0, death: b.1 })
}

fn search(p: &[(f64, f64)], q: &[(f64, f64)], i: usize, used: &mut [bool], cost: f64, best: &mut f64) {
    if cost >= *best && best.is_finite() {
        return;
    }
    if i == p.len() {
        let rest = q
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(&(b, d), _)| diagonal_cost(b, d))
            .fold(cost, f64::max);
        *best = best.min(rest);
        return;
    }
    search(p, q, i + 1, used, cost.max(diagonal_cost(p[i].0, p[i].1)), best);
    for j in 0..q.len() {
        if !used[j] {
            used[j] = true;
            search(p, q, i + 1, used, cost.max(pair_cost(p[i], q[j])), best);
            used[j] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const INF: f64 = f64::INFINITY;

    fn dgm(pairs: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_pairs(0, pairs.iter().copied()).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(bottleneck_distance(&dgm(&[(0.0, 1.0)]), &dgm(&[])).unwrap(), 0.5);
        assert_eq!(bottleneck_distance(&dgm(&[(0.0, INF)]), &dgm(&[])).unwrap(), INF);
        assert_eq!(bottleneck_bruteforce(&dgm(&[(0.0, 1.0)]), &dgm(&[(0.0, 1.0)])).unwrap(), 0.0);
        assert_eq!(bottleneck_bruteforce(&dgm(&[(0.0, 4.0)]), &dgm(&[(1.0, 3.0)])).unwrap(), 1.0);
        let a = dgm(&[(0.0, 1.0), (0.0, INF)]);
        let b = dgm(&[(0.0, INF)]);
        assert_eq!(bottleneck_bruteforce(&a, &b).unwrap(), 0.5);
        assert_eq!(bottleneck_distance(&a, &b).unwrap(), 0.5);
        assert_eq!(bottleneck_distance(&dgm(&[]), &dgm(&[])).unwrap(), 0.0);
    }

    #[test]
    fn candidates_cover_examples() {
        assert!(candidate_costs(&dgm(&[(0.0, 1.0)]), &dgm(&[])).contains(&0.5));
        let c = candidate_costs(&dgm(&[(0.0, 2.0)]), &dgm(&[(1.0, 2.0)]));
        for x in [0.0, 0.5, 1.0, 2.0] {
            assert!(c.contains(&x), "{x} missing from {c:?}");
        }
    }

    #[test]
    fn errors() {
        let d1 = PersistenceDiagram::empty(0);
        let d2 = PersistenceDiagram::empty(1);
        assert_eq!(bottleneck_distance(&d1, &d2), Err(DiagramError::DegreeMismatch(0, 1)));
        let big = dgm(&(0..13).map(|i| (i as f64, i as f64 + 1.0)).collect::<Vec<_>>());
        assert!(matches!(bottleneck_bruteforce(&big, &d1), Err(DiagramError::TooLarge { got: 13, .. })));
    }

    #[test]
    fn multiplicity_counts() {
        let a = PersistenceDiagram::from_pairs(0, [(0.0, 2.0), (0.0, 2.0)]).unwrap();
        let b = dgm(&[(0.0, 2.0)]);
        assert_eq!(bottleneck_distance(&a, &b).unwrap(), 1.0);
    }

    fn arb_diagram(max: usize) -> impl Strategy<Value = PersistenceDiagram> {
        // small integer grid so ties and shared coordinates are frequent
        prop::collection::vec((0i32..8, 1i32..6, prop::bool::weighted(0.2)), 0..=max).prop_map(|pts| {
            PersistenceDiagram::from_pairs(
                0,
                pts.into_iter().map(|(b, l, ess)| {
                    let b = b as f64 * 0.5;
                    (b, if ess { INF } else { b + l as f64 * 0.25 })
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn matches_bruteforce(a in arb_diagram(6), b in arb_diagram(6)) {
            prop_assert_eq!(bottleneck_distance(&a, &b).unwrap(), bottleneck_bruteforce(&a, &b).unwrap());
        }

        #[test]
        fn result_is_a_candidate(a in arb_diagram(8), b in arb_diagram(8)) {
            let d = bottleneck_distance(&a, &b).unwrap();
            prop_assert!(d == 0.0 || d.is_infinite() || candidate_costs(&a, &b).contains(&d));
        }

        #[test]
        fn metric_axioms(a in arb_diagram(5), b in arb_diagram(5), c in arb_diagram(5)) {
            let ab = bottleneck_distance(&a, &b).unwrap();
            prop_assert_eq!(ab, bottleneck_distance(&b, &a).unwrap());
            prop_assert_eq!(bottleneck_distance(&a, &a).unwrap(), 0.0);
            let ac = bottleneck_distance(&a, &c).unwrap();
            let bc = bottleneck_distance(&b, &c).unwrap();
            prop_assert!(ac <= ab + bc);
        }
    }
}

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{check_t, g_value, lipschitz_constant, CmdMode, CmdResult, ConvexError, TracePoint};
use crate::complex::MeshFunction;
use crate::exec::Executor;

pub const DEFAULT_EPS: f64 = 1e-3;

/// Intervals split per round. Fixed so that the sequence of probes does not
/// depend on the executor.
const BATCH: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct CmdOptions {
    pub eps: f64,
    pub executor: Executor,
    /// Hard stop; the result then carries whatever gap was reached.
    pub max_evaluations: usize,
}

impl Default for CmdOptions {
    fn default() -> Self {
        CmdOptions { eps: DEFAULT_EPS, executor: Executor::default(), max_evaluations: 200_000 }
    }
}

impl CmdOptions {
    pub fn with_eps(eps: f64) -> Self {
        CmdOptions { eps, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    lo: f64,
    hi: f64,
    mid: f64,
    upper: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    // max-heap on the upper bound, ties to the smaller left end
    fn cmp(&self, other: &Self) -> Ordering {
        self.upper.total_cmp(&other.upper).then(other.lo.total_cmp(&self.lo))
    }
}

struct Probe<'a> {
    f: &'a MeshFunction,
    h: &'a MeshFunction,
    k: usize,
    executor: Executor,
    trace: Vec<TracePoint>,
    best: TracePoint,
}

impl Probe<'_> {
    fn eval(&mut self, ts: &[f64]) -> Result<Vec<f64>, ConvexError> {
        let (f, h, k) = (self.f, self.h, self.k);
        let gs = self.executor.try_map(ts, |&t| g_value(f, h, k, t))?;
        for (&t, &g) in ts.iter().zip(&gs) {
            self.trace.push(TracePoint { t, g });
            if g > self.best.g || (g == self.best.g && t < self.best.t) {
                self.best = TracePoint { t, g };
            }
        }
        Ok(gs)
    }

    fn finish(mut self, mode: CmdMode, gap: f64, lipschitz: f64) -> CmdResult {
        self.trace.sort_by(|a, b| a.t.total_cmp(&b.t));
        self.trace.dedup_by(|a, b| a.t == b.t);
        let gap = if self.best.g.is_infinite() { 0.0 } else { gap };
        CmdResult {
            value: self.best.g,
            argmax_t: self.best.t,
            gap,
            mode,
            evaluations: self.trace.len(),
            lipschitz,
            certified: true,
            special_values: Vec::new(),
            trace: self.trace,
        }
    }
}

fn probe<'a>(f: &'a MeshFunction, h: &'a MeshFunction, k: usize, executor: Executor) -> Probe<'a> {
    Probe { f, h, k, executor, trace: Vec::new(), best: TracePoint { t: 0.0, g: f64::NEG_INFINITY } }
}

/// Certified maximum of `g` over `[0, 1]` with the default executor.
pub fn cmd_maximize(f: &MeshFunction, h: &MeshFunction, k: usize, eps: f64) -> Result<CmdResult, ConvexError> {
    cmd_maximize_with(f, h, k, &CmdOptions::with_eps(eps))
}

/// Lipschitz branch-and-bound. An interval `[l, r]` probed at its midpoint
/// `m` is bounded by `g(m) + L (r - l) / 2`; the search stops once the best
/// value found is within `eps` of the largest open bound.
pub fn cmd_maximize_with(f: &MeshFunction, h: &MeshFunction, k: usize, opts: &CmdOptions) -> Result<CmdResult, ConvexError> {
    if !(opts.eps > 0.0) {
        return Err(ConvexError::NonPositiveEps(opts.eps));
    }
    let lip = lipschitz_constant(&f.function, &h.function);
    let mut p = probe(f, h, k, opts.executor);
    let g = p.eval(&[0.0, 1.0, 0.5])?;
    if p.best.g.is_infinite() {
        return Ok(p.finish(CmdMode::BranchAndBound, 0.0, lip));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Interval { lo: 0.0, hi: 1.0, mid: 0.5, upper: g[2] + 0.5 * lip });
    loop {
        let top = heap.peek().map_or(f64::NEG_INFINITY, |i| i.upper);
        if p.best.g >= top - opts.eps || p.trace.len() >= opts.max_evaluations {
            let gap = (top - p.best.g).max(0.0);
            return Ok(p.finish(CmdMode::BranchAndBound, gap, lip));
        }
        let mut split = Vec::with_capacity(BATCH);
        while split.len() < BATCH {
            match heap.peek() {
                Some(i) if i.upper > p.best.g + opts.eps => split.push(heap.pop().expect("peeked")),
                _ => break,
            }
        }
        let mut children = Vec::with_capacity(2 * split.len());
        for i in &split {
            children.push((i.lo, i.mid));
            children.push((i.mid, i.hi));
        }
        let mids: Vec<f64> = children.iter().map(|&(l, r)| 0.5 * (l + r)).collect();
        let gs = p.eval(&mids)?;
        if p.best.g.is_infinite() {
            return Ok(p.finish(CmdMode::BranchAndBound, 0.0, lip));
        }
        for ((&(lo, hi), &mid), &g) in children.iter().zip(&mids).zip(&gs) {
            heap.push(Interval { lo, hi, mid, upper: g + 0.5 * lip * (hi - lo) });
        }
    }
}

/// Uniform sweep with `n + 1` points. The gap is the Lipschitz bound
/// between neighbouring samples.
pub fn cmd_grid(f: &MeshFunction, h: &MeshFunction, k: usize, n: usize, executor: Executor) -> Result<CmdResult, ConvexError> {
    if n < 1 {
        return Err(ConvexError::GridTooSmall { got: n, min: 1 });
    }
    let lip = lipschitz_constant(&f.function, &h.function);
    let ts = crate::roots::uniform_grid(0.0, 1.0, n);
    for &t in &ts {
        check_t(t)?;
    }
    let mut p = probe(f, h, k, executor);
    p.eval(&ts)?;
    Ok(p.finish(CmdMode::Grid, 0.5 * lip / n as f64, lip))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{fixture, BiFunction, FixtureKind, VertexFunction};

    fn mesh(kind: FixtureKind, n: usize) -> MeshFunction {
        let (k, f) = fixture(kind, n).unwrap();
        MeshFunction::new(k, f).unwrap()
    }

    #[test]
    fn rejects_bad_eps() {
        let m = mesh(FixtureKind::Disk, 8);
        assert!(matches!(cmd_maximize(&m, &m, 0, 0.0), Err(ConvexError::NonPositiveEps(_))));
        assert!(matches!(cmd_maximize(&m, &m, 0, f64::NAN), Err(ConvexError::NonPositiveEps(_))));
    }

    #[test]
    fn identical_inputs_give_zero() {
        let m = mesh(FixtureKind::Sphere, 16);
        let r = cmd_maximize(&m, &m, 0, 1e-3).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.gap <= 1e-3);
    }

    #[test]
    fn infinite_probe_short_circuits() {
        // two components against one: essential counts differ
        let (k, f) = fixture(FixtureKind::Disk, 8).unwrap();
        let m = MeshFunction::new(k, f).unwrap();
        let pts = vec![[0.0; 3]; 2];
        let two = crate::complex::SimplicialComplex::new(pts, vec![], vec![]).unwrap();
        let vf = VertexFunction::new(vec![0.0, 1.0]).unwrap();
        let h = MeshFunction::new(two, BiFunction::new(vf.clone(), vf).unwrap()).unwrap();
        let r = cmd_maximize(&m, &h, 0, 1e-3).unwrap();
        assert!(r.value.is_infinite());
        assert_eq!(r.gap, 0.0);
        assert_eq!(r.evaluations, 3);
    }

    #[test]
    fn cone_disk_degree_one() {
        let cone = mesh(FixtureKind::Cone, 32);
        let disk = mesh(FixtureKind::Disk, 32);
        let r = cmd_maximize(&cone, &disk, 1, 1e-3).unwrap();
        assert!(r.value >= 0.45 && (r.argmax_t - 0.5).abs() < 0.1, "{r:?}");
        assert!(r.gap <= 1e-3);
        assert_eq!(r.traced(r.argmax_t), Some(r.value));
    }

    #[test]
    fn sphere_ellipsoid_degree_zero() {
        let s = mesh(FixtureKind::Sphere, 32);
        let e = mesh(FixtureKind::Ellipsoid { a: 2.0, c: 1.0 }, 32);
        let r = cmd_maximize(&s, &e, 0, 1e-3).unwrap();
        assert!((r.value - 1.0).abs() < 0.05 && r.argmax_t.abs() < 0.02, "{r:?}");
    }

    #[test]
    fn executors_agree() {
        let s = mesh(FixtureKind::Sphere, 12);
        let e = mesh(FixtureKind::Ellipsoid { a: 1.5, c: 0.7 }, 12);
        let runs: Vec<CmdResult> = Executor::available()
            .into_iter()
            .map(|executor| cmd_maximize_with(&s, &e, 0, &CmdOptions { eps: 1e-3, executor, max_evaluations: 100_000 }).unwrap())
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn certificate_holds_on_dense_sweep() {
        let cone = mesh(FixtureKind::Cone, 8);
        let disk = mesh(FixtureKind::Disk, 8);
        for k in [0, 1] {
            let r = cmd_maximize(&cone, &disk, k, 1e-3).unwrap();
            let sweep = cmd_grid(&cone, &disk, k, 10_000, Executor::default()).unwrap();
            assert!(sweep.value <= r.value + r.gap, "k={k}: {} > {} + {}", sweep.value, r.value, r.gap);
        }
    }

    #[test]
    fn grid_mode_reports_lipschitz_gap() {
        let cone = mesh(FixtureKind::Cone, 8);
        let disk = mesh(FixtureKind::Disk, 8);
        let r = cmd_grid(&cone, &disk, 1, 10, Executor::Sequential).unwrap();
        assert_eq!(r.evaluations, 11);
        assert_eq!(r.gap, 0.5 * 4.0 / 10.0);
        assert!(matches!(cmd_grid(&cone, &disk, 1, 0, Executor::Sequential), Err(ConvexError::GridTooSmall { .. })));
    }
}

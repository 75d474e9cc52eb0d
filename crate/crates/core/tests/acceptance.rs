//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test --test acceptance`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cmdist::complex::{fixture, BiFunction, FixtureKind, MeshFunction, VertexFunction};
use cmdist::convex::{
    cmd_maximize, cmd_maximize_with, diagram_at, g_value, lipschitz_constant, matching_distance_lower_bound, slice_grid,
    CmdOptions, SlicePoint,
};
use cmdist::diagram::{bottleneck_bruteforce, bottleneck_distance, DiagramPoint, PersistenceDiagram};
use cmdist::exec::Executor;
use cmdist::pareto::{
    analytic_contours, cmd_via_special_values, cost_derivative, decompose, position_predict, special_values, Condition,
    Contour, SpecialOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MESH_TOL: f64 = 0.05;
const ELLIPSOID: FixtureKind = FixtureKind::Ellipsoid { a: 2.0, c: 1.0 };

type Outcome = Result<String, String>;

fn mesh(kind: FixtureKind, n: usize) -> MeshFunction {
    let (k, f) = fixture(kind, n).expect("fixture");
    MeshFunction::new(k, f).expect("mesh")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(start: Instant, budget: Duration) -> Result<(), String> {
    let el = start.elapsed();
    ensure(el < budget, || format!("took {:.2?}, budget {:.0?}", el, budget))
}

/// Sup-norm distance between diagram points.
fn point_gap(p: &DiagramPoint, b: f64, d: f64) -> f64 {
    (p.birth - b).abs().max((p.death - d).abs())
}

fn cone_disk_degree_one() -> Outcome {
    let start = Instant::now();
    let (f, h) = (mesh(FixtureKind::Cone, 64), mesh(FixtureKind::Disk, 64));
    let sig = diagram_at(&f, 1, 0.5).map_err(|e| e.to_string())?.significant(MESH_TOL);
    ensure(sig.len() == 1 && sig[0].multiplicity == 1, || format!("cone: {sig:?}"))?;
    ensure(point_gap(&sig[0], 0.0, 1.0) <= MESH_TOL, || format!("cone point {:?}", sig[0]))?;
    let flat = diagram_at(&h, 1, 0.5).map_err(|e| e.to_string())?.significant(MESH_TOL);
    ensure(flat.is_empty(), || format!("disk: {flat:?}"))?;
    let g = g_value(&f, &h, 1, 0.5).map_err(|e| e.to_string())?;
    ensure((g - 0.5).abs() <= MESH_TOL, || format!("g(1/2) = {g}"))?;
    let r = cmd_maximize(&f, &h, 1, 1e-3).map_err(|e| e.to_string())?;
    ensure(r.value >= 0.45, || format!("cmd = {}", r.value))?;
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("point ({:.4}, {:.4}), g(1/2) = {g:.4}, cmd = {:.4}", sig[0].birth, sig[0].death, r.value))
}

fn cone_disk_matching_degree_one() -> Outcome {
    let (f, h) = (mesh(FixtureKind::Cone, 64), mesh(FixtureKind::Disk, 64));
    let grid = slice_grid(11, 11).map_err(|e| e.to_string())?;
    let r = matching_distance_lower_bound(&f, &h, 1, &grid, Executor::default()).map_err(|e| e.to_string())?;
    ensure(r.value <= MESH_TOL, || format!("lower bound {} at {:?}", r.value, r.witness))?;
    Ok(format!("sampled d_match = {:.4} over {} slices", r.value, r.slices))
}

fn cone_disk_degree_zero() -> Outcome {
    let start = Instant::now();
    let (f, h) = (mesh(FixtureKind::Cone, 64), mesh(FixtureKind::Disk, 64));
    let mut worst: f64 = 0.0;
    for i in 0..=10 {
        let t = i as f64 / 10.0;
        let g = g_value(&f, &h, 0, t).map_err(|e| e.to_string())?;
        ensure(g <= MESH_TOL, || format!("g({t}) = {g}"))?;
        worst = worst.max(g);
    }
    let r = cmd_maximize(&f, &h, 0, 1e-3).map_err(|e| e.to_string())?;
    ensure(r.value <= MESH_TOL, || format!("cmd = {}", r.value))?;
    let s = [SlicePoint::new(0.5, 0.0).map_err(|e| e.to_string())?];
    let d = matching_distance_lower_bound(&f, &h, 0, &s, Executor::default()).map_err(|e| e.to_string())?.value;
    ensure((d - 0.5).abs() <= MESH_TOL, || format!("slice (1/2, 0): {d}"))?;
    within_budget(start, Duration::from_secs(10))?;
    Ok(format!("max sampled g = {worst:.2e}, cmd = {:.2e}, slice d_B = {d:.4}", r.value))
}

fn stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let eps = 1e-3;
    let mut worst: f64 = 0.0;
    let kinds = [FixtureKind::Cone, FixtureKind::Disk, FixtureKind::Sphere, ELLIPSOID];
    for kind in kinds {
        let f = mesh(kind, 16);
        for trial in 0..20 {
            let amp = rng.gen_range(0.0..=0.1);
            let mut jitter = |v: &VertexFunction| {
                VertexFunction::new(v.values().iter().map(|x| x + rng.gen_range(-amp..=amp)).collect()).unwrap()
            };
            let g = BiFunction::new(jitter(&f.function.phi1), jitter(&f.function.phi2)).unwrap();
            let delta = f.function.sup_distance(&g);
            let h = f.with_function(g).unwrap();
            let r = cmd_maximize(&f, &h, 0, eps).map_err(|e| e.to_string())?;
            let r1 = cmd_maximize(&f, &h, 1, eps).map_err(|e| e.to_string())?;
            for (k, v) in [(0, r.value), (1, r1.value)] {
                ensure(v <= delta + eps, || format!("{kind} trial {trial} k={k}: cmd {v} > {delta} + eps"))?;
                worst = worst.max(v / delta);
            }
        }
    }
    Ok(format!("160 runs, max cmd / |delta| = {worst:.3}"))
}

fn random_diagram(rng: &mut ChaCha8Rng, degree: usize, essential: usize) -> PersistenceDiagram {
    // coarse values so that ties and coincident points occur
    let n = rng.gen_range(0..=6 - essential);
    let mut v = || (rng.gen_range(-8..=8) as f64) / 4.0 + if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..0.25) };
    let mut pts = Vec::new();
    for _ in 0..n {
        let (a, b) = (v(), v());
        if a != b {
            pts.push(DiagramPoint::new(a.min(b), a.max(b)).unwrap());
        }
    }
    for _ in 0..essential {
        pts.push(DiagramPoint::new(v(), f64::INFINITY).unwrap());
    }
    PersistenceDiagram::canonical(degree, pts)
}

fn bottleneck_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut with_inf = 0;
    for i in 0..500 {
        let e1 = rng.gen_range(0..=2);
        // mostly equal essential counts, sometimes not
        let e2 = if rng.gen_bool(0.85) { e1 } else { rng.gen_range(0..=2) };
        let (a, b) = (random_diagram(&mut rng, 0, e1), random_diagram(&mut rng, 0, e2));
        if a.essential_count() + b.essential_count() > 0 {
            with_inf += 1;
        }
        let fast = bottleneck_distance(&a, &b).map_err(|e| e.to_string())?;
        let slow = bottleneck_bruteforce(&a, &b).map_err(|e| e.to_string())?;
        ensure(fast == slow || (fast.is_infinite() && slow.is_infinite()), || {
            format!("pair {i}: {fast} vs {slow}\n{a:?}\n{b:?}")
        })?;
    }
    within_budget(start, Duration::from_secs(5))?;
    Ok(format!("500 pairs, {with_inf} with infinite deaths"))
}

fn lipschitz() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairings = [
        (FixtureKind::Cone, FixtureKind::Disk),
        (FixtureKind::Sphere, ELLIPSOID),
        (FixtureKind::Cone, FixtureKind::Sphere),
        (FixtureKind::Disk, ELLIPSOID),
    ];
    let mut tightest: f64 = 0.0;
    for (p, q) in pairings {
        let (f, h) = (mesh(p, 32), mesh(q, 32));
        let lip = lipschitz_constant(&f.function, &h.function);
        for k in [0, 1] {
            for _ in 0..100 {
                let (t1, t2): (f64, f64) = (rng.gen(), rng.gen());
                let g1 = g_value(&f, &h, k, t1).map_err(|e| e.to_string())?;
                let g2 = g_value(&f, &h, k, t2).map_err(|e| e.to_string())?;
                if g1.is_infinite() || g2.is_infinite() {
                    ensure(g1 == g2, || format!("{p}/{q} k={k}: g jumps to infinity"))?;
                    continue;
                }
                let bound = lip * (t1 - t2).abs();
                ensure((g1 - g2).abs() <= bound, || format!("{p}/{q} k={k}: |{g1} - {g2}| > {lip} |{t1} - {t2}|"))?;
                if bound > 0.0 {
                    tightest = tightest.max((g1 - g2).abs() / bound);
                }
            }
        }
    }
    Ok(format!("800 pairs, max ratio to bound {tightest:.3}"))
}

fn position() -> Outcome {
    let mut worst: f64 = 0.0;
    for kind in [FixtureKind::Sphere, ELLIPSOID] {
        let f = mesh(kind, 64);
        let cs = analytic_contours(kind).map_err(|e| e.to_string())?;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let predicted = position_predict(&cs, t).map_err(|e| e.to_string())?;
            let d = diagram_at(&f, 0, t).map_err(|e| e.to_string())?;
            for c in d.finite_coordinates() {
                let dev = predicted.iter().map(|p| (p - c).abs()).fold(f64::INFINITY, f64::min);
                ensure(dev <= MESH_TOL, || format!("{kind} t={t}: coordinate {c} vs {predicted:?}"))?;
                worst = worst.max(dev);
            }
        }
    }
    let p = position_predict(&analytic_contours(FixtureKind::Sphere).unwrap(), 0.5).map_err(|e| e.to_string())?;
    ensure(p.iter().any(|v| (v + FRAC_1_SQRT_2).abs() <= 1e-15), || format!("sphere t=1/2: {p:?}"))?;
    Ok(format!("max deviation {worst:.2e}; sphere t=1/2 predicts {p:?}"))
}

fn special_values_route() -> Outcome {
    let start = Instant::now();
    let (f, h) = (mesh(FixtureKind::Sphere, 64), mesh(ELLIPSOID, 64));
    let (c1, c2) = (analytic_contours(FixtureKind::Sphere).unwrap(), analytic_contours(ELLIPSOID).unwrap());
    let (sv, set) = cmd_via_special_values(&f, &h, 0, &c1, &c2, &SpecialOptions::default()).map_err(|e| e.to_string())?;
    ensure((sv.value - 1.0).abs() <= MESH_TOL, || format!("special-value cmd = {}", sv.value))?;
    ensure(sv.argmax_t == 0.0, || format!("attained at t = {}", sv.argmax_t))?;
    let bnb = cmd_maximize_with(&f, &h, 0, &CmdOptions::with_eps(1e-4)).map_err(|e| e.to_string())?;
    ensure((sv.value - bnb.value).abs() <= 1e-3 + MESH_TOL, || format!("{} vs {}", sv.value, bnb.value))?;
    let near = set.iter().map(|v| (v.t - bnb.argmax_t).abs()).fold(f64::INFINITY, f64::min);
    ensure(near <= 1e-3, || format!("branch-and-bound argmax {} is {near} from the special set", bnb.argmax_t))?;
    within_budget(start, Duration::from_secs(30))?;
    Ok(format!("special {:.4} at t = {}, bnb {:.4} at t = {}", sv.value, sv.argmax_t, bnb.value, bnb.argmax_t))
}

fn derivative_diagnostics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let families: Vec<Vec<Contour>> = [FixtureKind::Sphere, ELLIPSOID, FixtureKind::Ellipsoid { a: 1.5, c: 0.7 }]
        .into_iter()
        .map(|k| analytic_contours(k).unwrap())
        .collect();
    let branches: Vec<_> = families
        .iter()
        .flatten()
        .flat_map(|c| decompose(Arc::new(c.clone())).unwrap().branches)
        .collect();
    let mut worst: f64 = 0.0;
    let mut probes = 0;
    while probes < 50 {
        let (i, j) = (rng.gen_range(0..branches.len()), rng.gen_range(0..branches.len()));
        if i == j {
            continue;
        }
        let t: f64 = rng.gen_range(0.05..0.95);
        let (b1, b2) = (&branches[i], &branches[j]);
        let gap = |th: f64| {
            let s = th.sin() / (th.sin() + th.cos());
            b1.w(s).unwrap() - b2.w(s).unwrap()
        };
        let th = t.atan2(1.0 - t);
        let step = 1e-5;
        let fd = (gap(th + step) - gap(th - step)) / (2.0 * step);
        let exact = cost_derivative(b1, b2, t).map_err(|e| e.to_string())?;
        let rel = ((fd - exact) / exact).abs();
        ensure(rel <= 1e-4, || format!("{} vs {} at t={t}: {exact} vs {fd}", b1.id(), b2.id()))?;
        worst = worst.max(rel);
        probes += 1;
    }
    let mut roots = 0;
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for v in special_values(&families[a], &families[b]).map_err(|e| e.to_string())? {
            if v.condition != Condition::OsculatingFormula {
                continue;
            }
            if let Some(cf) = v.closed_form {
                ensure((cf - v.t).abs() <= 1e-8, || format!("root {} vs closed form {cf}", v.t))?;
                roots += 1;
            }
        }
    }
    ensure(roots > 0, || "no in-domain roots to compare".into())?;
    Ok(format!("50 probes, max rel err {worst:.1e}; {roots} roots match the closed form"))
}

fn degenerate_detection() -> Outcome {
    let sphere = analytic_contours(FixtureKind::Sphere).unwrap();
    let moved: Vec<Contour> = sphere.iter().map(|c| c.translated(format!("{}+", c.id), [0.3, 0.3])).collect();
    let sv = special_values(&sphere, &moved).map_err(|e| e.to_string())?;
    let fam = sv
        .iter()
        .find(|v| v.condition == Condition::DegenerateFamily && v.interval.is_some_and(|[lo, hi]| lo <= 0.0 && hi >= 1.0));
    ensure(fam.is_some(), || "no degenerate family covering [0, 1]".into())?;
    let seg: Vec<[f64; 2]> = (0..12).map(|i| [0.1 * i as f64, 0.5 - 0.05 * i as f64]).collect();
    let seg = Contour::from_samples("segment", seg, "test").map_err(|e| e.to_string())?;
    let sv = special_values(&[seg], &sphere).map_err(|e| e.to_string())?;
    let flagged = sv.iter().filter(|v| v.zero_curvature).count();
    ensure(flagged > 0, || "segment not flagged".into())?;
    Ok(format!("family over {:?}; {flagged} zero-curvature value(s)", fam.unwrap().interval.unwrap()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("cone vs disk, degree 1", cone_disk_degree_one),
        ("cone vs disk, sampled matching distance, degree 1", cone_disk_matching_degree_one),
        ("cone vs disk, degree 0", cone_disk_degree_zero),
        ("stability under perturbation", stability),
        ("bottleneck vs brute force", bottleneck_oracle),
        ("Lipschitz bound on g", lipschitz),
        ("predicted diagram coordinates", position),
        ("special-value maximization", special_values_route),
        ("cost derivative and closed form", derivative_diagnostics),
        ("degenerate families and zero curvature", degenerate_detection),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let el = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{el:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} [{el:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

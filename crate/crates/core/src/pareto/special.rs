//! Candidate parameters `t` where the maximum of `g` can sit.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::branch::{decompose, Branch};
use super::contour::{Contour, Point2};
use super::geometry::t_of_orthogonality;
use super::ParetoError;
use crate::complex::MeshFunction;
use crate::convex::{cmd_maximize_with, g_value, lipschitz_constant, CmdMode, CmdOptions, CmdResult, TracePoint};
use crate::exec::Executor;
use crate::roots::{scan_roots_with_values, uniform_grid};

pub const CONTOUR_LIMIT: usize = 64;
pub const DEDUP_TOL: f64 = 1e-8;
const T_GRID: usize = 256;
const T_TOL: f64 = 1e-13;
const RATIOS: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    EndpointOrthogonality,
    EqualCostBreakpoint,
    OsculatingEquality,
    OsculatingFormula,
    DegenerateFamily,
}

impl Condition {
    pub fn name(self) -> &'static str {
        match self {
            Condition::EndpointOrthogonality => "endpoint-orthogonality",
            Condition::EqualCostBreakpoint => "equal-cost-breakpoint",
            Condition::OsculatingEquality => "osculating-equality",
            Condition::OsculatingFormula => "osculating-formula",
            Condition::DegenerateFamily => "degenerate-family",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// `phi` or `psi`.
    pub source: String,
    pub contour: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Point2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialValue {
    pub t: f64,
    pub condition: Condition,
    pub witnesses: Vec<Witness>,
    /// For degenerate families, the `t`-interval on which the condition holds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    /// Which condition holds identically on a degenerate family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Condition>,
    /// The ratio `c` of an equal-cost breakpoint (0 for a plain crossing).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    /// The arcsin closed form evaluated at an osculating-formula root.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_curvature: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SpecialValue {
    fn at(t: f64, condition: Condition, witnesses: Vec<Witness>) -> Self {
        SpecialValue {
            t,
            condition,
            witnesses,
            interval: None,
            family: None,
            ratio: None,
            closed_form: None,
            zero_curvature: false,
            warnings: Vec::new(),
        }
    }

    fn family(interval: [f64; 2], family: Condition, witnesses: Vec<Witness>) -> Self {
        SpecialValue {
            interval: Some(interval),
            family: Some(family),
            ..Self::at(interval[0], Condition::DegenerateFamily, witnesses)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialReport {
    pub special_values: Vec<SpecialValue>,
}

/// `t` solving `cos theta - sin theta = r` with `theta = atan(t / (1 - t))`,
/// from `sin 2 theta = 1 - r^2`. Equals `zeta / (1 + zeta)` with
/// `zeta = tan(asin(1 - r^2) / 2)` for `r >= 0`; negative `r` takes the
/// supplementary angle.
pub fn closed_form_t(r: f64) -> Option<f64> {
    let x = 1.0 - r * r;
    if !(-1.0..=1.0).contains(&x) {
        return None;
    }
    let a = x.asin();
    let theta = if r >= 0.0 { 0.5 * a } else { 0.5 * (PI - a) };
    if !(0.0..=0.5 * PI).contains(&theta) {
        return None;
    }
    let (s, c) = theta.sin_cos();
    Some(s / (s + c))
}

// Branch values sampled on the shared t grid; NaN where undefined.
struct Sampled {
    branch: Branch,
    source: &'static str,
    w: Vec<f64>,
    ell: Vec<f64>,
    center: Vec<Point2>,
    unstable: Option<String>,
}

struct Osc {
    ell: f64,
    center: Point2,
}

fn osc_at(b: &Branch, t: f64) -> Result<Option<Osc>, ParetoError> {
    let (_, o) = match b.osculating_at(t) {
        Ok(v) => v,
        Err(ParetoError::NoHit { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(match (o.signed_radius, o.center) {
        (Some(ell), Some(center)) => Some(Osc { ell, center }),
        _ => None,
    })
}

fn witness(s: &Sampled, t: f64) -> Witness {
    let hit = s.branch.hit(t);
    Witness {
        source: s.source.to_string(),
        contour: s.branch.id().to_string(),
        tau: hit.map(|h| h.tau),
        point: hit.map(|h| h.point),
        tau_range: None,
    }
}

fn family_witness(s: &Sampled) -> Witness {
    Witness {
        source: s.source.to_string(),
        contour: s.branch.id().to_string(),
        tau: None,
        point: None,
        tau_range: Some(s.branch.tau),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpecialOptions {
    pub executor: Executor,
    /// Run branch-and-bound with this eps and report the disagreement as gap.
    pub cross_check: Option<f64>,
    /// Samples per degenerate family.
    pub family_samples: usize,
}

impl Default for SpecialOptions {
    fn default() -> Self {
        SpecialOptions { executor: Executor::default(), cross_check: None, family_samples: 17 }
    }
}

/// The special set of two contour families with the default executor.
pub fn special_values(cphi: &[Contour], cpsi: &[Contour]) -> Result<Vec<SpecialValue>, ParetoError> {
    special_values_with(cphi, cpsi, Executor::default())
}

struct Search<'a> {
    grid: &'a [f64],
    sampled: &'a [Sampled],
}

impl Search<'_> {
    /// Common t-domain of the given branches as grid index range.
    fn domain(&self, ids: &[usize]) -> Option<(f64, f64, usize, usize)> {
        let lo = ids.iter().map(|&i| self.sampled[i].branch.t_range[0]).fold(f64::NEG_INFINITY, f64::max);
        let hi = ids.iter().map(|&i| self.sampled[i].branch.t_range[1]).fold(f64::INFINITY, f64::min);
        if lo > hi {
            return None;
        }
        let a = self.grid.partition_point(|&t| t < lo);
        let b = self.grid.partition_point(|&t| t <= hi);
        if a >= b {
            return None;
        }
        Some((lo, hi, a, b))
    }

    /// Roots of `f` on `[a, b)` of the grid, or the whole range when `f`
    /// vanishes identically there.
    fn solve<F: FnMut(f64) -> f64>(&self, values: &[f64], range: (usize, usize), scale: f64, f: F) -> Outcome {
        let tol = 1e-9 * (1.0 + scale);
        let grid = &self.grid[range.0..range.1];
        let spread = grid.len() >= 3 && grid[grid.len() - 1] - grid[0] > DEDUP_TOL;
        if spread && values.iter().all(|v| v.is_finite() && v.abs() <= tol) {
            return Outcome::Family([grid[0], grid[grid.len() - 1]]);
        }
        Outcome::Roots(scan_roots_with_values(f, grid, values, T_TOL))
    }
}

enum Outcome {
    Roots(Vec<f64>),
    Family([f64; 2]),
}

/// The special set: the endpoints `t = 0, 1`, endpoint orthogonality,
/// equal-cost breakpoints over all pairs of branch pairs and ratios
/// `c` in `{0, ±1/2, ±1, ±2}`, and the osculating conditions. Conditions
/// holding on a whole interval are reported once as a degenerate family.
pub fn special_values_with(cphi: &[Contour], cpsi: &[Contour], executor: Executor) -> Result<Vec<SpecialValue>, ParetoError> {
    let total = cphi.len() + cpsi.len();
    if total > CONTOUR_LIMIT {
        return Err(ParetoError::TooManyContours { got: total, limit: CONTOUR_LIMIT });
    }
    let mut out = vec![
        SpecialValue::at(0.0, Condition::EndpointOrthogonality, vec![]),
        SpecialValue::at(1.0, Condition::EndpointOrthogonality, vec![]),
    ];

    let mut branches: Vec<(Branch, &'static str)> = Vec::new();
    for (source, list) in [("phi", cphi), ("psi", cpsi)] {
        for c in list {
            for (tau, p) in [(0.0, c.endpoints()[0]), (1.0, c.endpoints()[1])] {
                let w = Witness { source: source.into(), contour: c.id.clone(), tau: Some(tau), point: Some(p), tau_range: None };
                out.push(SpecialValue::at(t_of_orthogonality(c, tau)?, Condition::EndpointOrthogonality, vec![w]));
            }
            let d = decompose(Arc::new(c.clone()))?;
            for flat in &d.flats {
                let w = Witness {
                    source: source.into(),
                    contour: c.id.clone(),
                    tau: None,
                    point: None,
                    tau_range: Some(flat.tau),
                };
                let mut sv = SpecialValue::family([flat.t, flat.t], Condition::OsculatingEquality, vec![w]);
                sv.zero_curvature = true;
                out.push(sv);
            }
            for &(tau, t) in &d.inflections {
                let w = Witness { source: source.into(), contour: c.id.clone(), tau: Some(tau), point: Some(c.point(tau)), tau_range: None };
                let mut sv = SpecialValue::at(t, Condition::OsculatingEquality, vec![w]);
                sv.zero_curvature = true;
                out.push(sv);
            }
            branches.extend(d.branches.into_iter().map(|b| (b, source)));
        }
    }

    let mut grid = uniform_grid(0.0, 1.0, T_GRID);
    for (b, _) in &branches {
        grid.extend(b.t_range);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

    let sampled: Vec<Sampled> = executor.try_map(&branches, |(b, source)| -> Result<Sampled, ParetoError> {
        let n = grid.len();
        let mut s = Sampled {
            branch: b.clone(),
            source,
            w: vec![f64::NAN; n],
            ell: vec![f64::NAN; n],
            center: vec![[f64::NAN; 2]; n],
            unstable: None,
        };
        for (i, &t) in grid.iter().enumerate() {
            let Some(hit) = b.hit(t) else { continue };
            s.w[i] = hit.w;
            match osc_at(b, t) {
                Ok(Some(o)) => {
                    s.ell[i] = o.ell;
                    s.center[i] = o.center;
                }
                Ok(None) => {}
                Err(e @ ParetoError::Unstable { .. }) => {
                    s.unstable.get_or_insert_with(|| e.to_string());
                }
                Err(e) => return Err(e),
            }
        }
        Ok(s)
    })?;

    let search = Search { grid: &grid, sampled: &sampled };
    let nb = sampled.len();
    let pairs: Vec<(usize, usize)> = (0..nb).flat_map(|i| (i + 1..nb).map(move |j| (i, j))).collect();

    let per_pair: Vec<Vec<SpecialValue>> = executor.map(&(0..pairs.len()).collect::<Vec<_>>(), |&p| {
        let mut found = Vec::new();
        let (i, j) = pairs[p];
        crossing_and_osculating(&search, i, j, &mut found);
        for &(k, l) in &pairs[p + 1..] {
            equal_cost(&search, (i, j), (k, l), &mut found);
        }
        found
    });
    out.extend(per_pair.into_iter().flatten());
    Ok(canonicalize(out))
}

fn scale_of(s: &Search, ids: &[usize], range: (usize, usize)) -> f64 {
    ids.iter()
        .flat_map(|&i| s.sampled[i].w[range.0..range.1].iter())
        .filter(|v| v.is_finite())
        .fold(0.0, |m: f64, v| m.max(v.abs()))
}

fn equal_cost(s: &Search, (i, j): (usize, usize), (k, l): (usize, usize), found: &mut Vec<SpecialValue>) {
    let ids = [i, j, k, l];
    let Some((_, _, a, b)) = s.domain(&ids) else { return };
    let scale = scale_of(s, &ids, (a, b));
    let sm = s.sampled;
    for &c in &RATIOS {
        let values: Vec<f64> =
            (a..b).map(|g| (sm[i].w[g] - sm[j].w[g]) - c * (sm[k].w[g] - sm[l].w[g])).collect();
        let f = |t: f64| match (sm[i].branch.w(t), sm[j].branch.w(t), sm[k].branch.w(t), sm[l].branch.w(t)) {
            (Some(wi), Some(wj), Some(wk), Some(wl)) => (wi - wj) - c * (wk - wl),
            _ => f64::NAN,
        };
        match s.solve(&values, (a, b), scale, f) {
            Outcome::Family(iv) => {
                let mut sv = SpecialValue::family(iv, Condition::EqualCostBreakpoint, ids.iter().map(|&x| family_witness(&sm[x])).collect());
                sv.ratio = Some(c);
                found.push(sv);
            }
            Outcome::Roots(roots) => {
                for t in roots {
                    let mut sv = SpecialValue::at(t, Condition::EqualCostBreakpoint, ids.iter().map(|&x| witness(&sm[x], t)).collect());
                    sv.ratio = Some(c);
                    found.push(sv);
                }
            }
        }
    }
}

fn crossing_and_osculating(s: &Search, i: usize, j: usize, found: &mut Vec<SpecialValue>) {
    let ids = [i, j];
    let Some((_, _, a, b)) = s.domain(&ids) else { return };
    let sm = s.sampled;
    let scale = scale_of(s, &ids, (a, b));
    let warnings: Vec<String> = ids.iter().filter_map(|&x| sm[x].unstable.clone()).collect();
    let with_warnings = |mut sv: SpecialValue| {
        sv.warnings.extend(warnings.iter().cloned());
        sv
    };

    // w_i = w_j
    let values: Vec<f64> = (a..b).map(|g| sm[i].w[g] - sm[j].w[g]).collect();
    let f = |t: f64| match (sm[i].branch.w(t), sm[j].branch.w(t)) {
        (Some(x), Some(y)) => x - y,
        _ => f64::NAN,
    };
    match s.solve(&values, (a, b), scale, f) {
        Outcome::Family(iv) => {
            let mut sv = SpecialValue::family(iv, Condition::EqualCostBreakpoint, ids.iter().map(|&x| family_witness(&sm[x])).collect());
            sv.ratio = Some(0.0);
            found.push(sv);
        }
        Outcome::Roots(roots) => {
            for t in roots {
                let mut sv = SpecialValue::at(t, Condition::EqualCostBreakpoint, ids.iter().map(|&x| witness(&sm[x], t)).collect());
                sv.ratio = Some(0.0);
                found.push(sv);
            }
        }
    }

    let both = |t: f64| match (osc_at(&sm[i].branch, t), osc_at(&sm[j].branch, t)) {
        (Ok(Some(p)), Ok(Some(q))) => Some((p, q)),
        _ => None,
    };
    let radius_scale = (a..b)
        .flat_map(|g| [sm[i].ell[g], sm[j].ell[g]])
        .filter(|v| v.is_finite())
        .fold(0.0, |m: f64, v| m.max(v.abs()));

    // l_i = l_j
    let values: Vec<f64> = (a..b).map(|g| sm[i].ell[g] - sm[j].ell[g]).collect();
    let f = |t: f64| both(t).map_or(f64::NAN, |(p, q)| p.ell - q.ell);
    match s.solve(&values, (a, b), radius_scale, f) {
        Outcome::Family(iv) => {
            found.push(with_warnings(SpecialValue::family(iv, Condition::OsculatingEquality, ids.iter().map(|&x| family_witness(&sm[x])).collect())));
        }
        Outcome::Roots(roots) => {
            for t in roots {
                found.push(with_warnings(SpecialValue::at(t, Condition::OsculatingEquality, ids.iter().map(|&x| witness(&sm[x], t)).collect())));
            }
        }
    }

    // (cos - sin)(l_i - l_j) = (y_i - y_j) - (x_i - x_j): the w_i - w_j slopes agree
    let h_of = |t: f64, li: f64, lj: f64, ci: Point2, cj: Point2| {
        let theta = t.atan2(1.0 - t);
        let (sn, cs) = theta.sin_cos();
        (cs - sn) * (li - lj) - ((ci[1] - cj[1]) - (ci[0] - cj[0]))
    };
    let values: Vec<f64> = (a..b)
        .map(|g| h_of(s.grid[g], sm[i].ell[g], sm[j].ell[g], sm[i].center[g], sm[j].center[g]))
        .collect();
    let f = |t: f64| both(t).map_or(f64::NAN, |(p, q)| h_of(t, p.ell, q.ell, p.center, q.center));
    match s.solve(&values, (a, b), radius_scale.max(scale), f) {
        Outcome::Family(iv) => {
            found.push(with_warnings(SpecialValue::family(iv, Condition::OsculatingFormula, ids.iter().map(|&x| family_witness(&sm[x])).collect())));
        }
        Outcome::Roots(roots) => {
            for t in roots {
                let mut sv = SpecialValue::at(t, Condition::OsculatingFormula, ids.iter().map(|&x| witness(&sm[x], t)).collect());
                if let Some((p, q)) = both(t) {
                    if p.ell != q.ell {
                        let r = ((p.center[1] - q.center[1]) - (p.center[0] - q.center[0])) / (p.ell - q.ell);
                        sv.closed_form = closed_form_t(r);
                        if let Some(cf) = sv.closed_form {
                            if (cf - t).abs() > DEDUP_TOL {
                                sv.warnings.push(format!("closed form gives t = {cf}, root finder {t}"));
                            }
                        }
                    }
                }
                found.push(with_warnings(sv));
            }
        }
    }
}

/// Sorts, and merges values closer than [`DEDUP_TOL`]; the merged entry keeps
/// the earliest condition.
fn canonicalize(values: Vec<SpecialValue>) -> Vec<SpecialValue> {
    let (mut points, mut families): (Vec<_>, Vec<_>) = values.into_iter().partition(|v| v.interval.is_none());
    let key = |v: &SpecialValue| (v.condition, v.witnesses.is_empty());
    points.sort_by(|a, b| a.t.total_cmp(&b.t).then(key(a).cmp(&key(b))));
    let mut merged: Vec<SpecialValue> = Vec::new();
    let mut group: Vec<SpecialValue> = Vec::new();
    let flush = |group: &mut Vec<SpecialValue>, merged: &mut Vec<SpecialValue>| {
        if group.is_empty() {
            return;
        }
        group.sort_by_key(key);
        let mut rep = group[0].clone();
        for g in group.iter().skip(1) {
            rep.zero_curvature |= g.zero_curvature;
            for w in &g.warnings {
                if !rep.warnings.contains(w) {
                    rep.warnings.push(w.clone());
                }
            }
        }
        merged.push(rep);
        group.clear();
    };
    for p in points {
        if let Some(first) = group.first() {
            if p.t - first.t > DEDUP_TOL {
                flush(&mut group, &mut merged);
            }
        }
        group.push(p);
    }
    flush(&mut group, &mut merged);

    families.sort_by(|a, b| {
        let (x, y) = (a.interval.unwrap(), b.interval.unwrap());
        x[0].total_cmp(&y[0]).then(x[1].total_cmp(&y[1])).then(a.family.cmp(&b.family))
    });
    let mut fam: Vec<SpecialValue> = Vec::new();
    for f in families {
        if let Some(last) = fam.last_mut() {
            let (x, y) = (last.interval.unwrap(), f.interval.unwrap());
            if (x[0] - y[0]).abs() <= DEDUP_TOL && (x[1] - y[1]).abs() <= DEDUP_TOL {
                last.zero_curvature |= f.zero_curvature;
                continue;
            }
        }
        fam.push(f);
    }
    merged.extend(fam);
    merged.sort_by(|a, b| a.t.total_cmp(&b.t).then(a.interval.is_some().cmp(&b.interval.is_some())));
    merged
}

/// Chebyshev-Lobatto points of `[lo, hi]`.
fn chebyshev(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 || hi <= lo {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                0.5 * (lo + hi) - 0.5 * (hi - lo) * (PI * i as f64 / (n - 1) as f64).cos()
            }
        })
        .collect()
}

/// Maximum of `g` over the special set, sampling each degenerate family at
/// Chebyshev points. Returns the result and the special set it used.
pub fn cmd_via_special_values(
    f: &MeshFunction,
    h: &MeshFunction,
    k: usize,
    cphi: &[Contour],
    cpsi: &[Contour],
    opts: &SpecialOptions,
) -> Result<(CmdResult, Vec<SpecialValue>), ParetoError> {
    let sv = special_values_with(cphi, cpsi, opts.executor)?;
    let mut ts: Vec<f64> = Vec::new();
    for v in &sv {
        match v.interval {
            Some([lo, hi]) => ts.extend(chebyshev(lo, hi, opts.family_samples)),
            None => ts.push(v.t),
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let gs = opts.executor.try_map(&ts, |&t| g_value(f, h, k, t))?;
    let mut best = 0;
    for (i, &g) in gs.iter().enumerate() {
        if g > gs[best] {
            best = i;
        }
    }
    let value = gs[best];
    let gap = match opts.cross_check {
        Some(eps) => {
            let b = cmd_maximize_with(f, h, k, &CmdOptions { eps, executor: opts.executor, ..Default::default() })?;
            if value.is_infinite() && b.value.is_infinite() {
                0.0
            } else {
                (value - b.value).abs()
            }
        }
        None => 0.0,
    };
    let result = CmdResult {
        value,
        argmax_t: ts[best],
        gap,
        mode: CmdMode::SpecialValues,
        evaluations: ts.len(),
        lipschitz: lipschitz_constant(&f.function, &h.function),
        certified: false,
        special_values: ts.clone(),
        trace: ts.iter().zip(&gs).map(|(&t, &g)| TracePoint { t, g }).collect(),
    };
    Ok((result, sv))
}

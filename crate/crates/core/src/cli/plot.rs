//! Static SVG plots: diagrams, `g(t)` traces and Pareto grids.

use std::fmt::Write;

use crate::convex::CmdResult;
use crate::diagram::PersistenceDiagram;
use crate::pareto::Contour;

const W: f64 = 480.0;
const H: f64 = 360.0;
const M: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Frame {
    x: [f64; 2],
    y: [f64; 2],
}

impl Frame {
    fn new(xs: impl Iterator<Item = f64> + Clone, ys: impl Iterator<Item = f64> + Clone) -> Self {
        let span = |it: &mut dyn Iterator<Item = f64>| {
            let (lo, hi) = it.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
            if !lo.is_finite() {
                [0.0, 1.0]
            } else if hi - lo < 1e-12 {
                [lo - 0.5, hi + 0.5]
            } else {
                let pad = 0.05 * (hi - lo);
                [lo - pad, hi + pad]
            }
        };
        Frame { x: span(&mut xs.clone()), y: span(&mut ys.clone()) }
    }

    fn px(&self, x: f64) -> f64 {
        M + (x - self.x[0]) / (self.x[1] - self.x[0]) * (W - 2.0 * M)
    }

    fn py(&self, y: f64) -> f64 {
        H - M - (y - self.y[0]) / (self.y[1] - self.y[0]) * (H - 2.0 * M)
    }

    fn open(&self, title: &str, xlabel: &str, ylabel: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(s, r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#, W - 2.0 * M, H - 2.0 * M);
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#, W / 2.0, M - 14.0, escape(title));
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 8.0, escape(xlabel));
        let _ = writeln!(s, r#"<text x="12" y="{}" text-anchor="middle" transform="rotate(-90 12 {})">{}</text>"#, H / 2.0, H / 2.0, escape(ylabel));
        for (v, anchor) in [(self.x[0], "start"), (self.x[1], "end")] {
            let _ = writeln!(s, r#"<text x="{:.2}" y="{}" text-anchor="{anchor}">{}</text>"#, self.px(v), H - M + 14.0, tick(v));
        }
        for v in self.y {
            let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, M - 4.0, self.py(v) + 4.0, tick(v));
        }
        s
    }

    fn polyline(&self, s: &mut String, pts: impl Iterator<Item = (f64, f64)>, color: &str, extra: &str) {
        let path: Vec<String> = pts
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        if path.len() > 1 {
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" {extra}/>"#, path.join(" "));
        }
    }
}

fn tick(v: f64) -> String {
    format!("{v:.3}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Scatter of the diagram with the diagonal; essential points sit on a
/// dashed line above the finite ones.
pub fn diagram_svg(d: &PersistenceDiagram, title: &str) -> String {
    let c = d.finite_coordinates();
    let base = Frame::new(c.iter().copied(), c.iter().copied());
    let span = base.x[1] - base.x[0];
    // room above the finite points for the infinity line
    let top = base.x[1] + 0.08 * span;
    let lim = [base.x[0], top + 0.05 * span];
    let f = Frame { x: lim, y: lim };
    let mut s = f.open(title, "birth", "death");
    f.polyline(&mut s, [(f.x[0], f.x[0]), (f.x[1], f.x[1])].into_iter(), "gray", "");
    if d.essential_count() > 0 {
        f.polyline(&mut s, [(f.x[0], top), (f.x[1], top)].into_iter(), "gray", r#"stroke-dasharray="4 3""#);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}">inf</text>"#, M + 4.0, f.py(top) - 4.0);
    }
    for p in &d.points {
        let y = if p.is_essential() { top } else { p.death };
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"><title>({}, {}) x{}</title></circle>"#,
            f.px(p.birth),
            f.py(y),
            COLORS[0],
            p.birth,
            p.death,
            p.multiplicity
        );
    }
    s.push_str("</svg>\n");
    s
}

/// `g(t)` over the evaluated points, with vertical marks at `marks`.
pub fn trace_svg(r: &CmdResult, marks: &[f64], title: &str) -> String {
    let f = Frame {
        x: [0.0, 1.0],
        ..Frame::new([0.0, 1.0].into_iter(), r.trace.iter().map(|p| p.g).chain([0.0]))
    };
    let mut s = f.open(title, "t", "g(t)");
    for &t in marks {
        f.polyline(&mut s, [(t, f.y[0]), (t, f.y[1])].into_iter(), COLORS[2], r#"stroke-dasharray="2 3" stroke-opacity="0.7""#);
    }
    f.polyline(&mut s, r.trace.iter().map(|p| (p.t, p.g)), COLORS[0], r#"stroke-width="1.5""#);
    if r.value.is_finite() {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{}"/>"#, f.px(r.argmax_t), f.py(r.value), COLORS[1]);
    }
    s.push_str("</svg>\n");
    s
}

/// Contour families in the plane, one color per family.
pub fn pareto_svg(families: &[(&str, &[Contour])], title: &str) -> String {
    let curves: Vec<(usize, Vec<(f64, f64)>)> = families
        .iter()
        .enumerate()
        .flat_map(|(i, (_, cs))| {
            cs.iter().map(move |c| (i, (0..=200).map(|j| c.point(j as f64 / 200.0)).map(|p| (p[0], p[1])).collect()))
        })
        .collect();
    let xs = curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.0)).collect::<Vec<_>>();
    let ys = curves.iter().flat_map(|(_, c)| c.iter().map(|p| p.1)).collect::<Vec<_>>();
    let f = Frame::new(xs.iter().copied(), ys.iter().copied());
    let mut s = f.open(title, "first coordinate", "second coordinate");
    for (i, c) in &curves {
        f.polyline(&mut s, c.iter().copied(), COLORS[i % COLORS.len()], r#"stroke-width="1.5""#);
    }
    for (i, (name, _)) in families.iter().enumerate() {
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{}">{}</text>"#, M + 6.0, M + 14.0 * (i + 1) as f64, COLORS[i % COLORS.len()], escape(name));
    }
    s.push_str("</svg>\n");
    s
}

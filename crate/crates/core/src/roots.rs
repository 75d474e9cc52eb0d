//! Bracketed scalar root finding.

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite
/// sign (or one of them zero). Returns `None` when the bracket is invalid.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> Option<f64> {
    let fa = f(a);
    let fb = f(b);
    brent_with_values(f, a, b, fa, fb, xtol)
}

/// [`brent`] for callers that already evaluated the bracket ends.
pub fn brent_with_values<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
) -> Option<f64> {
    if !(fa.is_finite() && fb.is_finite()) {
        return None;
    }
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() <= xtol {
            return Some(b);
        }
        let mut s = if fa != fc && fb != fc {
            // inverse quadratic interpolation
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let between = if lo < b { s > lo && s < b } else { s > b && s < lo };
        let tol = xtol.max(4.0 * f64::EPSILON * b.abs());
        if !between
            || (mflag && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!mflag && (s - b).abs() >= (c - d).abs() / 2.0)
            || (mflag && (b - c).abs() < tol)
            || (!mflag && (c - d).abs() < tol)
        {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    Some(b)
}

/// Finds every root of `f` on a sampled grid: exact zeros at grid points and
/// one Brent refinement per sign change between neighbours. `grid` must be
/// increasing. Roots closer than `xtol` are merged.
pub fn scan_roots<F: FnMut(f64) -> f64>(mut f: F, grid: &[f64], xtol: f64) -> Vec<f64> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    scan_roots_with_values(f, grid, &values, xtol)
}

pub fn scan_roots_with_values<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: &[f64],
    values: &[f64],
    xtol: f64,
) -> Vec<f64> {
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..grid.len() {
        if values[i] == 0.0 {
            roots.push(grid[i]);
            continue;
        }
        if i + 1 < grid.len() {
            let (fa, fb) = (values[i], values[i + 1]);
            if fb != 0.0 && fa.is_finite() && fb.is_finite() && fa.signum() != fb.signum() {
                if let Some(r) = brent_with_values(&mut f, grid[i], grid[i + 1], fa, fb, xtol) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= xtol);
    roots
}

/// `n + 1` equally spaced points covering `[lo, hi]`, endpoints exact.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / n as f64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0 * x - 5.0, 2.0, 3.0, 1e-14).unwrap();
        assert!((r - 2.094_551_481_542_326_5).abs() < 1e-12);
    }

    #[test]
    fn brent_rejects_non_bracket() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_none());
    }

    #[test]
    fn brent_accepts_zero_at_end() {
        assert_eq!(brent(|x| x - 1.0, 0.0, 1.0, 1e-12), Some(1.0));
    }

    #[test]
    fn scan_finds_all_sine_roots() {
        let grid = uniform_grid(0.5, 10.0, 100);
        let roots = scan_roots(f64::sin, &grid, 1e-13);
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k as f64 + 1.0) * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_grid_has_exact_ends() {
        let g = uniform_grid(0.1, 0.9, 7);
        assert_eq!(g.len(), 8);
        assert_eq!(g[0], 0.1);
        assert_eq!(g[7], 0.9);
    }
}

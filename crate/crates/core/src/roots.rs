//! Bracketed scalar root finding: uniform scan plus bisection.

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// `f(lo)` and `f(hi)` must differ in sign. Returns the bracket midpoint.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `n` sample points uniformly spaced strictly inside `(lo, hi)`.
pub fn interior_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + h * (i as f64 + 0.5)).collect()
}

/// Brackets `[a, b]` from consecutive samples where `f` changes sign.
///
/// Samples where `f` returns `None` break the scan, so no bracket
/// straddles a region where the function is undefined.
pub fn sign_changes(points: &[f64], f: impl Fn(f64) -> Option<f64>) -> Vec<(f64, f64)> {
    let values: Vec<Option<f64>> = points.iter().map(|&p| f(p)).collect();
    points
        .windows(2)
        .zip(values.windows(2))
        .filter_map(|(p, v)| match (v[0], v[1]) {
            (Some(a), Some(b)) if a == 0.0 || (a < 0.0) != (b < 0.0) => Some((p[0], p[1])),
            _ => None,
        })
        .collect()
}

//! Bracketed root finding for monotone functions.

/// Finds `x` in `[lo, hi]` with `f(x) = target` for a nondecreasing `f`.
///
/// Assumes `f(lo) <= target <= f(hi)`. Bisects until the bracket stops
/// shrinking in floating point or its width drops below `x_tol`.
pub fn bisect_increasing<F>(mut f: F, target: f64, mut lo: f64, mut hi: f64, x_tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(lo <= hi);
    for _ in 0..2048 {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi || hi - lo <= x_tol {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + 0.5 * (hi - lo)
}

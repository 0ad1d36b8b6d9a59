//! Bracketing root finders.

/// Bisect `f` on `[lo, hi]`, which must bracket a sign change.
///
/// Stops once the bracket is narrower than `tol` or cannot be split further
/// in floating point. Returns the midpoint of the final bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
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

/// Bisect a boolean predicate: `pred(lo) != pred(hi)` on entry. Returns the
/// transition point to within `tol`.
pub fn bisect_predicate<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    let at_lo = pred(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Geometric grid of `n >= 2` points from `lo` to `hi` inclusive.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let ratio = libm::log(hi / lo) / (n.max(2) - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo * libm::exp(ratio * i as f64) })
}

/// First adjacent pair of `grid` on which `f` changes sign.
pub fn first_sign_change<F, I>(mut f: F, grid: I) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
    I: IntoIterator<Item = f64>,
{
    let mut prev: Option<(f64, f64)> = None;
    for x in grid {
        let fx = f(x);
        if let Some((px, pf)) = prev {
            if (pf < 0.0) != (fx < 0.0) || fx == 0.0 {
                return Some((px, x));
            }
        }
        prev = Some((x, fx));
    }
    None
}

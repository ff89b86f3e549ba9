//! Small quadrature and root-finding helpers.

use crate::scalar::Real;

/// Root of `f` in `[lo, hi]` by bisection. `f(lo)` and `f(hi)` must differ in
/// sign; returns `None` otherwise.
pub fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> Option<T> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Some(lo);
    }
    if f_hi == T::zero() {
        return Some(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return None;
    }
    let two = T::lit(2.0);
    for _ in 0..200 {
        let mid = (lo + hi) / two;
        if hi - lo <= tol || mid == lo || mid == hi {
            return Some(mid);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Some(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Some((lo + hi) / two)
}

/// Trapezoidal weight of sample `k` out of `n` on a uniform grid of spacing `h`.
#[inline]
pub fn trapezoid_weight<T: Real>(k: usize, n: usize, h: T) -> T {
    if k == 0 || k + 1 == n {
        h / T::lit(2.0)
    } else {
        h
    }
}

/// Exact integral over `[a, b]` of the piecewise-linear interpolant through
/// `(x[k], y[k])`. `x` must be increasing and `[a, b]` inside its range.
pub fn integrate_linear<T: Real>(x: &[T], y: &[T], a: T, b: T) -> T {
    let half = T::lit(0.5);
    let interp = |i: usize, t: T| {
        let s = (t - x[i]) / (x[i + 1] - x[i]);
        y[i] + (y[i + 1] - y[i]) * s
    };
    let mut total = T::zero();
    for i in 0..x.len().saturating_sub(1) {
        let lo = x[i].max(a);
        let hi = x[i + 1].min(b);
        if hi > lo {
            total = total + (interp(i, lo) + interp(i, hi)) * half * (hi - lo);
        }
    }
    total
}

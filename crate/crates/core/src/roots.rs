//! Scalar root finding and one-dimensional maximization.

use crate::error::{Error, Result};

/// Absolute residual at which the bracketed solver stops.
pub const ROOT_RESIDUAL: f64 = 1e-12;
pub const ROOT_MAX_ITER: usize = 200;

/// Finds a root of `f` in `[a, b]` given a sign change between the ends.
///
/// Secant steps are taken inside the bracket and replaced by bisection
/// whenever they fall outside it or stop shrinking it. Terminates when the
/// residual drops to `ROOT_RESIDUAL` or the bracket collapses to adjacent
/// floats.
pub fn bracketed_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    bracketed_root_with(f, a, fa, b, fb)
}

/// As [`bracketed_root`] with endpoint values already evaluated.
pub fn bracketed_root_with<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
) -> Result<f64> {
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::BracketFailure { upper: b });
    }
    let (mut lo, mut flo, mut hi, mut fhi) = (a, fa, b, fb);
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let mut width = (hi - lo).abs();
    for it in 0..ROOT_MAX_ITER {
        if best.1.abs() <= ROOT_RESIDUAL {
            break;
        }
        let mut x = lo - flo * (hi - lo) / (fhi - flo);
        let inside = x > lo.min(hi) && x < lo.max(hi);
        // every third step is a plain bisection so the bracket keeps shrinking
        if !inside || !x.is_finite() || it % 3 == 2 {
            x = 0.5 * (lo + hi);
        }
        if x == lo || x == hi {
            break;
        }
        let fx = f(x);
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            break;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        let w = (hi - lo).abs();
        if w >= width && it % 3 != 2 {
            // secant stalled on one side; force bisection next round
            let m = 0.5 * (lo + hi);
            let fm = f(m);
            if fm.abs() < best.1.abs() {
                best = (m, fm);
            }
            if fm.signum() == flo.signum() {
                lo = m;
                flo = fm;
            } else {
                hi = m;
                fhi = fm;
            }
        }
        width = (hi - lo).abs();
    }
    Ok(best.0)
}

/// Plain bisection on a boolean predicate: returns the boundary between
/// `pred(a)` and `!pred(a)` on `[a, b]` to within `tol`.
pub fn bisect_predicate<F: FnMut(f64) -> bool>(mut pred: F, a: f64, b: f64, tol: f64) -> f64 {
    let pa = pred(a);
    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        if pred(m) == pa {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bracketed_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn decreasing_function() {
        let r = bracketed_root(|x| 1.0 - x.powi(3), 0.0, 5.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(matches!(
            bracketed_root(|x| x * x + 1.0, -1.0, 1.0),
            Err(Error::BracketFailure { .. })
        ));
    }

    #[test]
    fn flat_then_steep() {
        // secant stalls on this shape; bisection fallback must still converge
        let r = bracketed_root(|x: f64| if x < 0.999 { 1e-3 } else { -(x - 0.999) * 1e6 + 1e-3 }, 0.0, 1.0)
            .unwrap();
        assert!((r - 0.999_000_001).abs() < 1e-9);
    }

    #[test]
    fn predicate_bisection() {
        let b = bisect_predicate(|x| x < 0.3, 0.0, 1.0, 1e-14);
        assert!((b - 0.3).abs() < 1e-13);
    }

    #[test]
    fn golden_section() {
        let (x, v) = golden_max(|x| -(x - 0.7) * (x - 0.7) + 3.0, 0.0, 2.0, 1e-12);
        assert!((x - 0.7).abs() < 1e-6);
        assert!((v - 3.0).abs() < 1e-12);
    }
}

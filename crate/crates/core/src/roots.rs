//! Root finding for strictly decreasing scalar functions.

use crate::error::{Error, Result};

/// Bisection width at which we switch to Newton polishing.
pub const BISECT_WIDTH: f64 = 1e-13;

/// Finds the root of a strictly decreasing `f` on `[lo, hi]`, where
/// `f(lo) > 0 > f(hi)`. Bisects down to [`BISECT_WIDTH`] and then takes two
/// Newton steps with the derivative `df`, keeping them only when they stay
/// in the final bracket and do not increase `|f|`.
pub fn decreasing_root<F, D>(f: F, df: D, mut lo: f64, mut hi: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo >= 0.0 && fhi <= 0.0) {
        return Err(Error::Bracket(format!(
            "f({lo}) = {flo}, f({hi}) = {fhi} do not bracket a decreasing root"
        )));
    }
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    let width = BISECT_WIDTH * hi.abs().max(1.0);
    let mut iter = 0;
    while hi - lo > width && iter < 400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
    }
    let mut x = 0.5 * (lo + hi);
    let (blo, bhi) = (lo - width, hi + width);
    for _ in 0..2 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let y = x - f(x) / d;
        if y >= blo && y <= bhi && f(y).abs() <= f(x).abs() {
            x = y;
        }
    }
    Ok(x)
}

/// Doubles `hi` from `start` until `f(hi) < 0`.
pub fn expand_upper<F: Fn(f64) -> f64>(f: F, start: f64) -> Result<f64> {
    let mut hi = start;
    for _ in 0..200 {
        if f(hi) < 0.0 {
            return Ok(hi);
        }
        hi *= 2.0;
    }
    Err(Error::Bracket(format!("no sign change found up to {hi}")))
}

/// Halves `lo` from `start` until `f(lo) > 0`.
pub fn shrink_lower<F: Fn(f64) -> f64>(f: F, start: f64) -> Result<f64> {
    let mut lo = start;
    for _ in 0..1100 {
        if f(lo) > 0.0 {
            return Ok(lo);
        }
        lo *= 0.5;
    }
    Err(Error::Bracket(format!("no sign change found down to {lo}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_fixed_point() {
        // x = cos x, written as a decreasing function
        let x = decreasing_root(|x: f64| x.cos() - x, |x: f64| -x.sin() - 1.0, 0.0, 1.0).unwrap();
        assert!((x - 0.739_085_133_215_160_6).abs() < 1e-15);
    }

    #[test]
    fn rejects_missing_bracket() {
        assert!(decreasing_root(|x| 1.0 - x, |_| -1.0, 2.0, 3.0).is_err());
        assert!(expand_upper(|_| 1.0, 1.0).is_err());
    }

    #[test]
    fn bracket_helpers() {
        let hi = expand_upper(|x| 10.0 - x, 1.0).unwrap();
        assert_eq!(hi, 16.0);
        let lo = shrink_lower(|x| 1.0 / x - 100.0, 1.0).unwrap();
        assert_eq!(lo, 1.0 / 128.0);
    }
}

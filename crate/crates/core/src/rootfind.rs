//! Bisection in log space for positive-domain monotone problems.

use crate::error::{Error, Result};

/// Finds a root of `f` on `[lo, hi]` (both > 0) by bisecting ln x until the
/// bracket's relative width is below `rel_tol`. Returns the geometric
/// midpoint of the final bracket.
pub fn bisect_log<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::invalid("bracket", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo.ln(), hi.ln());
    let mut fa = f(lo);
    let fb = f(hi);
    if fa == 0.0 {
        return Ok(lo);
    }
    if fb == 0.0 {
        return Ok(hi);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoCrossing { what, lo, hi });
    }
    // ln-width below rel_tol means relative bracket width below ~rel_tol
    let tol = rel_tol.max(f64::EPSILON).ln_1p();
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m.exp());
        if fm == 0.0 {
            return Ok(m.exp());
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok((0.5 * (a + b)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_crossing() {
        // x^-2.5 = 3 x^-1.5  ->  x = 1/3
        let r = bisect_log(|x| (x.powf(-2.5) / (3.0 * x.powf(-1.5))).ln(), 1e-6, 1e3, 1e-10, "t").unwrap();
        assert!((r - 1.0 / 3.0).abs() * 3.0 < 1e-10);
    }

    #[test]
    fn no_sign_change() {
        let e = bisect_log(|x| x, 1.0, 2.0, 1e-6, "t").unwrap_err();
        assert!(matches!(e, Error::NoCrossing { .. }));
    }

    #[test]
    fn bad_bracket() {
        assert!(bisect_log(|x| x - 1.0, 0.0, 2.0, 1e-6, "t").is_err());
        assert!(bisect_log(|x| x - 1.0, 3.0, 2.0, 1e-6, "t").is_err());
    }
}

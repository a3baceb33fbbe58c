//! Central finite differences with one Richardson extrapolation step.

use crate::{Error, Result};

/// Estimates `f'(x)` from the central differences at steps `h` and `h/2`:
///
/// ```text
/// D(h) = (f(x + h) - f(x - h)) / 2h
/// f'   ≈ (4 D(h/2) - D(h)) / 3
/// ```
///
/// The truncation error is `O(h^4)`. `f` returns a vector of values, all
/// of which are differentiated with the same stencil; every evaluation must
/// return the same number of entries.
pub fn richardson_central<F>(f: F, x: f64, h: f64) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<Vec<f64>>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let fp1 = f(x + h)?;
    let fm1 = f(x - h)?;
    let fph = f(x + h / 2.0)?;
    let fmh = f(x - h / 2.0)?;
    richardson_combine(&fp1, &fm1, &fph, &fmh, h)
}

/// Combines values already evaluated at `x + h`, `x − h`, `x + h/2` and
/// `x − h/2` (in that order).
pub fn richardson_combine(
    fp1: &[f64],
    fm1: &[f64],
    fph: &[f64],
    fmh: &[f64],
    h: f64,
) -> Result<Vec<f64>> {
    let n = fp1.len();
    for v in [fm1, fph, fmh] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
    }
    Ok((0..n)
        .map(|i| {
            let coarse = (fp1[i] - fm1[i]) / (2.0 * h);
            let fine = (fph[i] - fmh[i]) / h;
            (4.0 * fine - coarse) / 3.0
        })
        .collect())
}

/// The four abscissae used by [`richardson_central`], in evaluation order.
pub fn stencil(x: f64, h: f64) -> [f64; 4] {
    [x + h, x - h, x + h / 2.0, x - h / 2.0]
}

/// Scalar convenience wrapper around [`richardson_central`].
pub fn richardson_central_scalar<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    richardson_central(|t| f(t).map(|v| vec![v]), x, h).map(|v| v[0])
}

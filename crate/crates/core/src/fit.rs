//! Log-log least-squares fit of `value ≈ prefactor · |λ − λc|^exponent`.

use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
}

impl PowerLaw {
    pub fn eval(&self, distance: f64) -> f64 {
        self.prefactor * distance.powf(self.exponent)
    }
}

/// Fits `ln value = ln prefactor + exponent · ln|λ − center|`.
///
/// Requires at least four samples, all on one side of `center`, with
/// positive values and distances spanning at least one decade.
pub fn fit_power_law(samples: &[(f64, f64)], center: f64) -> Result<PowerLaw> {
    if samples.len() < 4 {
        return Err(Error::InsufficientSamples(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    let above = samples[0].0 > center;
    let mut pts = Vec::with_capacity(samples.len());
    for &(lam, value) in samples {
        if lam == center || (lam > center) != above {
            return Err(Error::InsufficientSamples(
                "samples must lie strictly on one side of the center".into(),
            ));
        }
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::InsufficientSamples(format!(
                "non-positive or non-finite value {value} at λ = {lam}"
            )));
        }
        pts.push(((lam - center).abs().ln(), value.ln()));
    }
    let (lo, hi) = pts
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.0), hi.max(p.0))
        });
    if hi - lo < std::f64::consts::LN_10 * (1.0 - 1e-12) {
        return Err(Error::InsufficientSamples(
            "distances span less than one decade".into(),
        ));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    Ok(PowerLaw {
        exponent,
        prefactor: (my - exponent * mx).exp(),
    })
}

/// `count` points with `|λ − center|` log-spaced between `near` and `far`.
pub fn log_spaced(center: f64, near: f64, far: f64, count: usize, above: bool) -> Vec<f64> {
    let sign = if above { 1.0 } else { -1.0 };
    (0..count)
        .map(|i| {
            let t = if count > 1 {
                i as f64 / (count - 1) as f64
            } else {
                0.0
            };
            let d = (far.ln() + t * (near.ln() - far.ln())).exp();
            center + sign * d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_inverse_square() {
        for above in [true, false] {
            let samples: Vec<_> = log_spaced(0.5, 1e-3, 1e-2, 6, above)
                .into_iter()
                .map(|l| (l, (l - 0.5f64).abs().powi(-2)))
                .collect();
            let fit = fit_power_law(&samples, 0.5).unwrap();
            assert!((fit.exponent + 2.0).abs() < 1e-12);
            assert!((fit.prefactor - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let ok = |d: f64| (0.5 + d, d.powi(-2));
        assert!(fit_power_law(&[ok(1e-3), ok(1e-2), ok(5e-3)], 0.5).is_err());
        // straddling the center
        let mut s = vec![ok(1e-3), ok(2e-3), ok(5e-3), ok(1e-2)];
        s[1].0 = 0.5 - 2e-3;
        assert!(fit_power_law(&s, 0.5).is_err());
        // less than a decade
        let s = vec![ok(1e-3), ok(2e-3), ok(3e-3), ok(5e-3)];
        assert!(fit_power_law(&s, 0.5).is_err());
        // non-positive value
        let mut s = vec![ok(1e-3), ok(2e-3), ok(5e-3), ok(1e-2)];
        s[0].1 = 0.0;
        assert!(fit_power_law(&s, 0.5).is_err());
    }

    #[test]
    fn spacing_endpoints() {
        let pts = log_spaced(0.5, 1e-3, 1e-2, 5, false);
        assert!((pts[0] - 0.49).abs() < 1e-15);
        assert!((pts[4] - 0.499).abs() < 1e-15);
    }
}

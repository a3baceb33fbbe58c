//! Homodyne detection of `x̂(φ) = x cos φ + p sin φ` on one mode.
//!
//! The outcome density is Gaussian with mean `cos φ ⟨x⟩ + sin φ ⟨p⟩` and
//! variance `σ(φ) = cos²φ σ11 + sin²φ σ22`, so the Fisher information is
//! that of a Gaussian location-scale family:
//!
//! ```text
//! F = ⟨ẋ(φ)⟩² / σ(φ) + σ̇(φ)² / (2 σ(φ)²)
//! ```

use serde::{Deserialize, Serialize};

use super::diagonal_moments;
use crate::dicke::{self, DickeParams};
use crate::gaussian::{self, GaussianState};
use crate::qfi::state_derivative;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    Radiation,
    Atoms,
}

impl Subsystem {
    pub fn mode(self) -> usize {
        match self {
            Subsystem::Radiation => 0,
            Subsystem::Atoms => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomodyneSetting {
    /// Local-oscillator phase.
    pub phi: f64,
    pub target: Subsystem,
}

impl HomodyneSetting {
    pub fn radiation(phi: f64) -> Self {
        Self {
            phi,
            target: Subsystem::Radiation,
        }
    }

    pub fn atoms(phi: f64) -> Self {
        Self {
            phi,
            target: Subsystem::Atoms,
        }
    }
}

/// Mean and variance of the `x̂(φ)` outcome distribution, the marginal of
/// the Wigner function along the rotated axis.
pub fn quadrature_distribution(state: &GaussianState, phi: f64) -> Result<(f64, f64)> {
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "phase must be finite, got {phi}"
        )));
    }
    let (s11, s22) = diagonal_moments(state)?;
    let (s, c) = phi.sin_cos();
    let mean = c * state.mean()[0] + s * state.mean()[1];
    Ok((mean, c * c * s11 + s * s * s22))
}

/// Fisher information of a Gaussian density with the given moments and
/// their `λ`-derivatives.
pub fn gaussian_fisher_information(variance: f64, dmean: f64, dvariance: f64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::SingularCovariance(variance));
    }
    Ok(dmean * dmean / variance + dvariance * dvariance / (2.0 * variance * variance))
}

/// Fisher information of homodyne detection on the chosen subsystem.
pub fn fi_homodyne(params: &DickeParams, setting: &HomodyneSetting) -> Result<f64> {
    let state = dicke::ground_state(params)?;
    let deriv = state_derivative(params, None)?;
    let m = setting.target.mode();
    let reduced = gaussian::partial_trace(&state, &[m])?;
    let (_, variance) = quadrature_distribution(&reduced, setting.phi)?;
    let (s, c) = setting.phi.sin_cos();
    let i = 2 * m;
    let dmean = c * deriv.dmean[i] + s * deriv.dmean[i + 1];
    let dvariance = c * c * deriv.dcov[(i, i)] + s * s * deriv.dcov[(i + 1, i + 1)];
    gaussian_fisher_information(variance, dmean, dvariance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfi::qfi;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    fn ratio(lam: f64, setting: HomodyneSetting) -> f64 {
        let p = DickeParams::resonant(lam);
        fi_homodyne(&p, &setting).unwrap() / qfi(&p).unwrap().qfi
    }

    #[test]
    fn vacuum_marginal() {
        for phi in [0.0, 0.3, FRAC_PI_2, 2.0] {
            let (m, v) = quadrature_distribution(&GaussianState::vacuum(1), phi).unwrap();
            assert_eq!(m, 0.0);
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn superradiant_marginal() {
        let p = DickeParams::resonant(1.0);
        let red = dicke::reduced_radiation_state(&p).unwrap();
        let (m, v) = quadrature_distribution(&red, 0.0).unwrap();
        let alpha = dicke::derive(&p).unwrap().alpha;
        assert!((m - alpha * 200f64.sqrt()).abs() < 1e-12);
        assert!((m - 13.693).abs() < 1e-3);
        assert_eq!(v, red.cov()[(0, 0)]);
    }

    #[test]
    fn squeezed_marginals_near_criticality() {
        let red = dicke::reduced_radiation_state(&DickeParams::resonant(0.499)).unwrap();
        let (_, vx) = quadrature_distribution(&red, 0.0).unwrap();
        let (_, vp) = quadrature_distribution(&red, FRAC_PI_2).unwrap();
        assert!(vx / vp > 10.0);
    }

    #[test]
    fn non_diagonal_and_multimode_inputs_are_rejected() {
        let cov = nalgebra::DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 1.0]);
        let st = GaussianState::new(nalgebra::DVector::zeros(2), cov).unwrap();
        assert!(matches!(
            quadrature_distribution(&st, 0.0),
            Err(Error::NonDiagonal(_))
        ));
        assert!(quadrature_distribution(&GaussianState::vacuum(2), 0.0).is_err());
    }

    #[test]
    fn strong_coupling_limits() {
        for phi in [0.0, FRAC_PI_6, FRAC_PI_3] {
            let r = ratio(50.0, HomodyneSetting::radiation(phi));
            assert!((r / phi.cos().powi(2) - 1.0).abs() < 0.01, "φ={phi}: {r}");
        }
        assert!(ratio(50.0, HomodyneSetting::atoms(0.0)) < 1e-3);
    }

    #[test]
    fn weak_coupling_limit() {
        // 2[ω + (ω + ω0) cos 2φ]² λ² / (ω² (ω + ω0)²) at ω = ω0 = 1
        let expected = |phi: f64| 2.0 * (1.0 + 2.0 * (2.0 * phi).cos()).powi(2) / 4.0 * 1e-4;
        for phi in [0.0, FRAC_PI_4] {
            for setting in [HomodyneSetting::radiation(phi), HomodyneSetting::atoms(phi)] {
                let r = ratio(0.01, setting);
                assert!((r / expected(phi) - 1.0).abs() < 0.05, "{setting:?}: {r}");
            }
        }
        assert!((expected(0.0) - 4.5e-4).abs() < 1e-15);
    }

    #[test]
    fn homodyne_never_beats_the_qfi() {
        for lam in [0.05, 0.3, 0.48, 0.499, 0.501, 0.52, 0.9, 4.0] {
            for phi in [0.0, 0.4, FRAC_PI_3, FRAC_PI_2, 2.5] {
                for setting in [HomodyneSetting::radiation(phi), HomodyneSetting::atoms(phi)] {
                    let r = ratio(lam, setting);
                    assert!((0.0..=1.0 + 1e-6).contains(&r), "λ={lam} {setting:?}: {r}");
                }
            }
        }
    }

    #[test]
    fn ratio_independent_of_atom_number() {
        for lam in [0.6, 1.0] {
            let p = DickeParams::resonant(lam);
            let s = HomodyneSetting::radiation(FRAC_PI_6);
            let r1 = fi_homodyne(&p, &s).unwrap() / qfi(&p).unwrap().qfi;
            let p4 = p.with_atoms(10_000);
            let r4 = fi_homodyne(&p4, &s).unwrap() / qfi(&p4).unwrap().qfi;
            assert!((r1 - r4).abs() < 5.0 / 100.0, "λ={lam}: {r1} vs {r4}");
        }
    }
}

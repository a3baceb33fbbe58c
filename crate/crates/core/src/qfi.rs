//! Quantum Fisher information of the coupling `λ` for the Gaussian ground
//! state family, and the coefficients of the symmetric logarithmic
//! derivative `L = Rᵀ Φ R + Rᵀ ζ − ν`.
//!
//! For pure Gaussian states `Φ = −σ̇` and `ζ = Ωᵀ σ⁻¹ ⟨Ṙ⟩`, so
//!
//! ```text
//! H(λ) = Tr[Ωᵀ σ̇ Ω Φ] + ⟨Ṙ⟩ᵀ σ⁻¹ ⟨Ṙ⟩
//! ```
//!
//! Derivatives are taken numerically by [`state_derivative`].

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::derivative::richardson_central;
use crate::dicke::{self, DickeParams};
use crate::gaussian::{symplectic_form, GaussianState};
use crate::{Error, Result};

/// Relative step: `h = STEP_FRACTION · |λ − λc|`.
pub const STEP_FRACTION: f64 = 1e-5;

/// `∂σ/∂λ` and `∂⟨R⟩/∂λ` of the two-mode ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDerivative {
    pub dcov: DMatrix<f64>,
    pub dmean: DVector<f64>,
    /// Coarse step of the Richardson pair (the fine step is `step / 2`).
    pub step: f64,
}

/// Default step for a given coupling. Proportional to the distance from
/// the critical point so the stencil never straddles it.
pub fn default_step(params: &DickeParams) -> f64 {
    STEP_FRACTION * (params.lam - params.lambda_c()).abs()
}

fn flatten(state: &GaussianState) -> Vec<f64> {
    let mut v: Vec<f64> = state.cov().iter().copied().collect();
    v.extend(state.mean().iter());
    v
}

/// Evaluates `f` on the Richardson stencil around `params.lam` after
/// checking that every stencil point stays on the same side of `λc` and
/// outside the singularity window.
pub(crate) fn differentiate<F>(
    params: &DickeParams,
    step: Option<f64>,
    f: F,
) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&DickeParams) -> Result<Vec<f64>>,
{
    let h = checked_step(params, step)?;
    let d = richardson_central(|lam| f(&params.with_lambda(lam)), params.lam, h)?;
    Ok((d, h))
}

/// Resolves the finite-difference step and verifies that the stencil stays
/// on one side of `λc`, outside the singularity window.
pub fn checked_step(params: &DickeParams, step: Option<f64>) -> Result<f64> {
    params.validate()?;
    let lambda_c = params.lambda_c();
    let dist = (params.lam - lambda_c).abs();
    if dist <= params.window {
        return Err(Error::CriticalPointSingularity {
            lambda: params.lam,
            lambda_c,
            window: params.window,
        });
    }
    let h = step.unwrap_or_else(|| default_step(params));
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if dist - h <= params.window {
        return Err(Error::StepCrossesCriticalPoint {
            lambda: params.lam,
            step: h,
            lambda_c,
        });
    }
    Ok(h)
}

/// Central-difference derivative of the ground-state moments with one
/// Richardson step. `step` defaults to [`default_step`].
pub fn state_derivative(params: &DickeParams, step: Option<f64>) -> Result<StateDerivative> {
    let (d, h) = differentiate(params, step, |p| {
        dicke::ground_state_unchecked(p).map(|s| flatten(&s))
    })?;
    let dcov = DMatrix::from_column_slice(4, 4, &d[..16]);
    let dcov = (&dcov + dcov.transpose()) * 0.5;
    let dmean = DVector::from_column_slice(&d[16..]);
    Ok(StateDerivative {
        dcov,
        dmean,
        step: h,
    })
}

/// `H = quadratic_term + displacement_term`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationResult {
    pub qfi: f64,
    /// `Tr[Ωᵀ σ̇ Ω Φ]` with `Φ = −σ̇`.
    pub quadratic_term: f64,
    /// `⟨Ṙ⟩ᵀ σ⁻¹ ⟨Ṙ⟩`.
    pub displacement_term: f64,
}

/// Pure-state QFI from the state and its derivative.
pub fn qfi_from_derivative(
    state: &GaussianState,
    deriv: &StateDerivative,
) -> Result<EstimationResult> {
    let modes = state.modes();
    let omega = symplectic_form(modes);
    let phi = -&deriv.dcov;
    let quadratic_term = (omega.transpose() * &deriv.dcov * &omega * &phi).trace();
    let det = state.cov().determinant();
    let chol = state
        .cov()
        .clone()
        .cholesky()
        .ok_or(Error::SingularCovariance(det))?;
    let displacement_term = deriv.dmean.dot(&chol.solve(&deriv.dmean));
    Ok(EstimationResult {
        qfi: quadratic_term + displacement_term,
        quadratic_term,
        displacement_term,
    })
}

/// Quantum Fisher information of `λ` in the ground state.
pub fn qfi(params: &DickeParams) -> Result<EstimationResult> {
    qfi_with_step(params, None)
}

pub fn qfi_with_step(params: &DickeParams, step: Option<f64>) -> Result<EstimationResult> {
    let state = dicke::ground_state(params)?;
    let deriv = state_derivative(params, step)?;
    qfi_from_derivative(&state, &deriv)
}

/// Coefficients of the symmetric logarithmic derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct SldCoefficients {
    pub phi: DMatrix<f64>,
    pub zeta: DVector<f64>,
    pub nu: f64,
}

impl SldCoefficients {
    /// Coefficients with respect to `R' = F1 R`, the quadratures after the
    /// first local squeezing of the diagonalizing chain:
    /// `Φ' = F1⁻ᵀ Φ F1⁻¹`, `ζ' = F1⁻ᵀ ζ`.
    pub fn in_frame(&self, f1: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let inv = f1
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidParameter("frame matrix is singular".into()))?;
        let phi = inv.transpose() * &self.phi * &inv;
        let zeta = inv.transpose() * &self.zeta;
        Ok((phi, zeta))
    }
}

/// `Φ = −σ̇`, `ζ = Ωᵀ σ⁻¹ ⟨Ṙ⟩`, `ν = Tr[Ωᵀ σ Ω Φ]`.
pub fn sld_coefficients(params: &DickeParams) -> Result<SldCoefficients> {
    let state = dicke::ground_state(params)?;
    let deriv = state_derivative(params, None)?;
    let omega = symplectic_form(state.modes());
    let phi = -&deriv.dcov;
    let det = state.cov().determinant();
    let chol = state
        .cov()
        .clone()
        .cholesky()
        .ok_or(Error::SingularCovariance(det))?;
    let zeta = omega.transpose() * chol.solve(&deriv.dmean);
    let nu = (omega.transpose() * state.cov() * &omega * &phi).trace();
    Ok(SldCoefficients { phi, zeta, nu })
}

/// SLD coefficients expressed in the `R' = F1 R` frame.
pub fn sld_local_frame(params: &DickeParams) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let sld = sld_coefficients(params)?;
    let chain = dicke::symplectic_chain(&dicke::derive(params)?)?;
    sld.in_frame(&chain.f1_matrix())
}

/// Cramér–Rao variance bound `1 / (m · F)` for `m` repetitions.
pub fn cramer_rao_bound(information: f64, samples: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "number of samples must be >= 1".into(),
        ));
    }
    if !(information > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Fisher information must be > 0, got {information}"
        )));
    }
    Ok(1.0 / (samples as f64 * information))
}

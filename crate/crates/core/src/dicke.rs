//! Thermodynamic-limit ground state of the Dicke Hamiltonian
//!
//! ```text
//! H = ω0 Jz + ω a†a + (λ/√N)(a† + a)(J+ + J−)
//! ```
//!
//! after the Holstein–Primakoff mapping of the collective spin onto a
//! second bosonic mode. The quadratic Hamiltonian is brought to two
//! independent oscillators of frequencies `ε−`, `ε+` by the chain
//! `F = F3 F2 F1` (local squeezing, rotation by `θ`, local squeezing),
//! which maps laboratory quadratures onto normal-mode quadratures. The
//! ground state is the normal-mode vacuum pulled back through `F⁻¹` and
//! displaced by the macroscopic occupations `(α√2N, 0, −β√2N, 0)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::gaussian::{self, GaussianState, SymplecticTransform};
use crate::{Error, Result};

/// Default half-width of the excluded region around `λc`.
pub const DEFAULT_SINGULARITY_WINDOW: f64 = 1e-8;

/// Default number of atoms used throughout the superradiant figures.
pub const DEFAULT_N_ATOMS: u64 = 100;

fn default_window() -> f64 {
    DEFAULT_SINGULARITY_WINDOW
}

/// Model inputs. Frequencies are in units of `ω0` by convention but no
/// conversion is done internally.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams {
    /// Radiation frequency `ω`.
    pub omega: f64,
    /// Atomic transition frequency `ω0`.
    pub omega0: f64,
    /// Coupling `λ`.
    pub lam: f64,
    /// Number of atoms `N`.
    pub n_atoms: u64,
    /// Operations refuse couplings with `|λ − λc| <= window`.
    #[serde(default = "default_window")]
    pub window: f64,
}

impl DickeParams {
    pub fn new(omega: f64, omega0: f64, lam: f64, n_atoms: u64) -> Result<Self> {
        let p = Self {
            omega,
            omega0,
            lam,
            n_atoms,
            window: DEFAULT_SINGULARITY_WINDOW,
        };
        p.validate()?;
        Ok(p)
    }

    /// `ω = ω0 = 1`, `N = 100`.
    pub fn resonant(lam: f64) -> Self {
        Self {
            omega: 1.0,
            omega0: 1.0,
            lam,
            n_atoms: DEFAULT_N_ATOMS,
            window: DEFAULT_SINGULARITY_WINDOW,
        }
    }

    pub fn with_lambda(self, lam: f64) -> Self {
        Self { lam, ..self }
    }

    pub fn with_atoms(self, n_atoms: u64) -> Self {
        Self { n_atoms, ..self }
    }

    pub fn with_window(self, window: f64) -> Self {
        Self { window, ..self }
    }

    /// `λc = √(ω ω0) / 2`.
    pub fn lambda_c(&self) -> f64 {
        (self.omega * self.omega0).sqrt() / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_frequencies()?;
        if !(self.lam >= 0.0) || !self.lam.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling must be finite and >= 0, got {}",
                self.lam
            )));
        }
        Ok(())
    }

    // everything except the sign of λ; finite-difference stencils around
    // small λ evaluate the (analytic) state at slightly negative coupling
    pub(crate) fn validate_frequencies(&self) -> Result<()> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radiation frequency must be finite and > 0, got {}",
                self.omega
            )));
        }
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "atomic frequency must be finite and > 0, got {}",
                self.omega0
            )));
        }
        if self.n_atoms == 0 {
            return Err(Error::InvalidParameter(
                "number of atoms must be >= 1".into(),
            ));
        }
        if !(self.window >= 0.0) || !self.window.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "singularity window must be finite and >= 0, got {}",
                self.window
            )));
        }
        if !self.lam.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coupling must be finite, got {}",
                self.lam
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Normal,
    Superradiant,
}

/// Quantities derived from [`DickeParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DickeDerived {
    pub lambda_c: f64,
    /// Dimensionless critical parameter: 1 in the normal phase,
    /// `λc² / λ²` in the superradiant phase.
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
    pub eps_minus: f64,
    pub eps_plus: f64,
    /// `ω̃ = ω0 (1 + k) / 2k`.
    pub omega_tilde: f64,
    pub phase: Phase,
    #[serde(skip)]
    params: DickeParams,
}

impl DickeDerived {
    pub fn params(&self) -> &DickeParams {
        &self.params
    }

    /// First-moment vector `(α√2N, 0, −β√2N, 0)`.
    pub fn mean(&self) -> DVector<f64> {
        let s = (2.0 * self.params.n_atoms as f64).sqrt();
        DVector::from_vec(vec![self.alpha * s, 0.0, -self.beta * s, 0.0])
    }
}

/// Solves for the derived quantities. Fails inside the singularity window
/// around `λc`, where `ε− → 0`.
pub fn derive(params: &DickeParams) -> Result<DickeDerived> {
    params.validate()?;
    solve(params)
}

pub(crate) fn solve(params: &DickeParams) -> Result<DickeDerived> {
    params.validate_frequencies()?;
    let DickeParams {
        omega: w,
        omega0: w0,
        lam,
        ..
    } = *params;
    let lambda_c = params.lambda_c();
    if (lam - lambda_c).abs() <= params.window {
        return Err(Error::CriticalPointSingularity {
            lambda: lam,
            lambda_c,
            window: params.window,
        });
    }
    let superradiant = lam > lambda_c;
    let (phase, k) = if superradiant {
        (Phase::Superradiant, (lambda_c / lam).powi(2))
    } else {
        (Phase::Normal, 1.0)
    };
    let (alpha, beta) = if superradiant {
        (
            lam / w * (1.0 - k * k).max(0.0).sqrt(),
            ((1.0 - k) / 2.0).max(0.0).sqrt(),
        )
    } else {
        (0.0, 0.0)
    };
    let omega_tilde = w0 * (1.0 + k) / (2.0 * k);

    // 2 ε±² = P ± Q; the product ε+² ε−² is factored explicitly so that ε−
    // keeps full relative precision next to λc
    let w0k = w0 / k;
    let sum = w * w + w0k * w0k;
    let diff = w0k * w0k - w * w;
    let q = (diff * diff + 16.0 * lam * lam * w * w0 * k).sqrt();
    let eps_plus_sq = (sum + q) / 2.0;
    let lc2 = lambda_c * lambda_c;
    let product = if superradiant {
        16.0 * (lam - lambda_c) * (lam + lambda_c) * (lam * lam + lc2)
    } else {
        4.0 * w * w0 * (lambda_c - lam.abs()) * (lambda_c + lam.abs())
    };
    if product < 0.0 {
        if product < -1e-12 * eps_plus_sq.max(1.0) {
            return Err(Error::Unphysical(format!(
                "negative squared eigenfrequency at λ = {lam}"
            )));
        }
        return Err(Error::CriticalPointSingularity {
            lambda: lam,
            lambda_c,
            window: params.window,
        });
    }
    let eps_minus_sq = product / eps_plus_sq;
    if eps_minus_sq == 0.0 {
        return Err(Error::CriticalPointSingularity {
            lambda: lam,
            lambda_c,
            window: params.window,
        });
    }
    let theta = 0.5
        * f64::atan2(
            4.0 * lam * (w * w0 * k).sqrt() * k * k,
            w0 * w0 - k * k * w * w,
        );
    Ok(DickeDerived {
        lambda_c,
        k,
        alpha,
        beta,
        theta,
        eps_minus: eps_minus_sq.sqrt(),
        eps_plus: eps_plus_sq.sqrt(),
        omega_tilde,
        phase,
        params: *params,
    })
}

/// The three factors of the diagonalizing map.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticChain {
    /// `Diag(1/√ω, √ω, 1/√ω̃, √ω̃)`.
    pub f1: [f64; 4],
    /// Rotation angle of `F2`.
    pub theta: f64,
    /// `Diag(√ε−, 1/√ε−, √ε+, 1/√ε+)`.
    pub f3: [f64; 4],
    mean: DVector<f64>,
}

fn diag4(d: &[f64; 4]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(d))
}

fn rotation(theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, -s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, s, 0.0, c,
        ],
    )
}

impl SymplecticChain {
    pub fn f1_matrix(&self) -> DMatrix<f64> {
        diag4(&self.f1)
    }

    pub fn f2_matrix(&self) -> DMatrix<f64> {
        rotation(self.theta)
    }

    pub fn f3_matrix(&self) -> DMatrix<f64> {
        diag4(&self.f3)
    }

    /// `F = F3 F2 F1`: laboratory quadratures to normal-mode quadratures.
    pub fn diagonalizing(&self) -> Result<SymplecticTransform> {
        SymplecticTransform::linear(self.f3_matrix() * self.f2_matrix() * self.f1_matrix())
    }

    /// `F⁻¹ = F1⁻¹ F2ᵀ F3⁻¹` followed by the macroscopic displacement:
    /// maps the normal-mode vacuum onto the ground state.
    pub fn state_preparation(&self) -> Result<SymplecticTransform> {
        let inv = |d: &[f64; 4]| diag4(&[1.0 / d[0], 1.0 / d[1], 1.0 / d[2], 1.0 / d[3]]);
        let m = inv(&self.f1) * rotation(-self.theta) * inv(&self.f3);
        SymplecticTransform::new(m, self.mean.clone())
    }
}

/// Builds the chain `F3 ∘ F2 ∘ F1` for the derived quantities.
pub fn symplectic_chain(derived: &DickeDerived) -> Result<SymplecticChain> {
    let DickeDerived {
        eps_minus,
        eps_plus,
        omega_tilde,
        theta,
        ..
    } = *derived;
    if !(eps_minus > 0.0) {
        return Err(Error::CriticalPointSingularity {
            lambda: derived.params.lam,
            lambda_c: derived.lambda_c,
            window: derived.params.window,
        });
    }
    let w = derived.params.omega;
    Ok(SymplecticChain {
        f1: [
            1.0 / w.sqrt(),
            w.sqrt(),
            1.0 / omega_tilde.sqrt(),
            omega_tilde.sqrt(),
        ],
        theta,
        f3: [
            eps_minus.sqrt(),
            1.0 / eps_minus.sqrt(),
            eps_plus.sqrt(),
            1.0 / eps_plus.sqrt(),
        ],
        mean: derived.mean(),
    })
}

/// Two-mode ground state (mode 1 radiation, mode 2 atoms).
pub fn ground_state(params: &DickeParams) -> Result<GaussianState> {
    params.validate()?;
    ground_state_unchecked(params)
}

pub(crate) fn ground_state_unchecked(params: &DickeParams) -> Result<GaussianState> {
    let derived = solve(params)?;
    let prep = symplectic_chain(&derived)?.state_preparation()?;
    gaussian::apply_symplectic(&GaussianState::vacuum(2), &prep)
}

/// Reduced state of the radiation mode.
pub fn reduced_radiation_state(params: &DickeParams) -> Result<GaussianState> {
    gaussian::partial_trace(&ground_state(params)?, &[0])
}

/// Reduced state of the atomic (Holstein–Primakoff) mode.
pub fn reduced_atomic_state(params: &DickeParams) -> Result<GaussianState> {
    gaussian::partial_trace(&ground_state(params)?, &[1])
}

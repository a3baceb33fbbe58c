//! Algebra of M-mode Gaussian states: first and second moments, symplectic
//! maps, two-mode symplectic spectra, logarithmic negativity and the
//! phase-space (Wigner and characteristic) functions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Ordered quadratures `(x1, p1, ..., xM, pM)`.
pub type QuadratureVector = DVector<f64>;

/// Symmetrized second moments, `2M x 2M`.
pub type CovarianceMatrix = DMatrix<f64>;

/// Tolerance for structural identities (symmetry, symplectic law).
pub const STRUCTURAL_TOL: f64 = 1e-10;

/// Slack allowed below the Heisenberg bound `d- >= 1/2`.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// The symplectic form `Ω = ⊕ ((0, 1), (-1, 0))` for `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * modes, 2 * modes);
    for m in 0..modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// A Gaussian state, fully described by its first-moment vector and
/// covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct GaussianState {
    mean: QuadratureVector,
    cov: CovarianceMatrix,
}

impl GaussianState {
    /// Builds a state, checking that the dimensions agree and that the
    /// covariance matrix is symmetric. Physicality is not checked here; use
    /// [`GaussianState::check_physical`] when the input comes from outside.
    pub fn new(mean: QuadratureVector, cov: CovarianceMatrix) -> Result<Self> {
        let n = mean.len();
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::InvalidModes(format!(
                "quadrature vector length {n} is not a positive even number"
            )));
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: cov.nrows().max(cov.ncols()),
            });
        }
        let asym = max_abs(&(&cov - cov.transpose()));
        if asym > STRUCTURAL_TOL * max_abs(&cov).max(1.0) {
            return Err(Error::NotSymmetric(asym));
        }
        // store the exactly symmetric part
        let cov = (&cov + cov.transpose()) * 0.5;
        Ok(Self { mean, cov })
    }

    /// The `M`-mode vacuum: zero mean, covariance `I / 2`.
    pub fn vacuum(modes: usize) -> Self {
        Self {
            mean: DVector::zeros(2 * modes),
            cov: DMatrix::identity(2 * modes, 2 * modes) * 0.5,
        }
    }

    /// Single-mode thermal state with `n_th` mean photons, covariance
    /// `(1 + 2 n_th) / 2 · I`.
    pub fn thermal(n_th: f64) -> Result<Self> {
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "thermal occupation must be finite and >= 0, got {n_th}"
            )));
        }
        Ok(Self {
            mean: DVector::zeros(2),
            cov: DMatrix::identity(2, 2) * (0.5 + n_th),
        })
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &QuadratureVector {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn into_parts(self) -> (QuadratureVector, CovarianceMatrix) {
        (self.mean, self.cov)
    }

    /// Checks the uncertainty relation through the symplectic eigenvalues.
    pub fn check_physical(&self) -> Result<()> {
        let d_min = min_symplectic_eigenvalue(&self.cov)?;
        if d_min < 0.5 - PHYSICALITY_TOL {
            return Err(Error::Unphysical(format!(
                "smallest symplectic eigenvalue {d_min} < 1/2"
            )));
        }
        Ok(())
    }
}

/// Serialized form: `{modes, mean: [...], cov: [[...], ...]}` with a
/// row-major covariance matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateRecord {
    modes: usize,
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
}

impl From<GaussianState> for StateRecord {
    fn from(s: GaussianState) -> Self {
        let n = s.mean.len();
        StateRecord {
            modes: s.modes(),
            mean: s.mean.iter().copied().collect(),
            cov: (0..n)
                .map(|i| (0..n).map(|j| s.cov[(i, j)]).collect())
                .collect(),
        }
    }
}

impl TryFrom<StateRecord> for GaussianState {
    type Error = Error;

    fn try_from(r: StateRecord) -> Result<Self> {
        let n = 2 * r.modes;
        if r.mean.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.mean.len(),
            });
        }
        if r.cov.len() != n || r.cov.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.cov.len(),
            });
        }
        let cov = DMatrix::from_fn(n, n, |i, j| r.cov[i][j]);
        GaussianState::new(DVector::from_vec(r.mean), cov)
    }
}

/// A linear canonical map `R -> F R + d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    displacement: QuadratureVector,
}

impl SymplecticTransform {
    /// Wraps `matrix` and `displacement`, verifying `F Ω Fᵀ = Ω` and
    /// `Det F = 1` to [`STRUCTURAL_TOL`] (relative to the size of `F`).
    pub fn new(matrix: DMatrix<f64>, displacement: QuadratureVector) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || !n.is_multiple_of(2) || matrix.ncols() != n {
            return Err(Error::InvalidModes(format!(
                "symplectic matrix must be 2M x 2M, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if displacement.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: displacement.len(),
            });
        }
        let t = Self {
            matrix,
            displacement,
        };
        let scale = max_abs(&t.matrix).powi(2).max(1.0);
        let err = t.symplectic_defect();
        if err > STRUCTURAL_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "matrix violates the symplectic condition by {err:e}"
            )));
        }
        let det = t.matrix.determinant();
        if (det - 1.0).abs() > STRUCTURAL_TOL * scale {
            return Err(Error::InvalidParameter(format!(
                "symplectic matrix has determinant {det}"
            )));
        }
        Ok(t)
    }

    /// A transform without displacement.
    pub fn linear(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, DVector::zeros(n))
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * modes, 2 * modes),
            displacement: DVector::zeros(2 * modes),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &QuadratureVector {
        &self.displacement
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `max |F Ω Fᵀ − Ω|`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        max_abs(&(&self.matrix * &omega * self.matrix.transpose() - omega))
    }

    /// Same map with a different displacement.
    pub fn with_displacement(mut self, displacement: QuadratureVector) -> Result<Self> {
        if displacement.len() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: displacement.len(),
            });
        }
        self.displacement = displacement;
        Ok(self)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymplecticTransform) -> Result<SymplecticTransform> {
        if self.matrix.nrows() != other.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: other.matrix.nrows(),
            });
        }
        Ok(SymplecticTransform {
            matrix: &self.matrix * &other.matrix,
            displacement: &self.matrix * &other.displacement + &self.displacement,
        })
    }
}

/// `⟨R⟩ -> F⟨R⟩ + d`, `σ -> F σ Fᵀ`.
pub fn apply_symplectic(state: &GaussianState, t: &SymplecticTransform) -> Result<GaussianState> {
    if state.mean.len() != t.matrix.nrows() {
        return Err(Error::DimensionMismatch {
            expected: t.matrix.nrows(),
            found: state.mean.len(),
        });
    }
    let mean = &t.matrix * &state.mean + &t.displacement;
    let cov = &t.matrix * &state.cov * t.matrix.transpose();
    GaussianState::new(mean, cov)
}

/// Reduced state of the modes listed in `keep` (0-based, in the given
/// order).
pub fn partial_trace(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    if keep.is_empty() {
        return Err(Error::InvalidModes("no modes to keep".into()));
    }
    let modes = state.modes();
    for (i, &m) in keep.iter().enumerate() {
        if m >= modes {
            return Err(Error::InvalidModes(format!(
                "mode {m} out of range for a {modes}-mode state"
            )));
        }
        if keep[..i].contains(&m) {
            return Err(Error::InvalidModes(format!("mode {m} listed twice")));
        }
    }
    let idx: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let n = idx.len();
    let mean = DVector::from_fn(n, |i, _| state.mean[idx[i]]);
    let cov = DMatrix::from_fn(n, n, |i, j| state.cov[(idx[i], idx[j])]);
    GaussianState::new(mean, cov)
}

/// Symplectic eigenvalues and local invariants of a two-mode covariance
/// matrix `σ = ((A, C), (Cᵀ, B))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymplecticSpectrum {
    pub d_plus: f64,
    pub d_minus: f64,
    /// Eigenvalues of the partially transposed covariance matrix.
    pub ppt_d_plus: f64,
    pub ppt_d_minus: f64,
    /// `[Det A, Det B, Det C, Det σ]`.
    pub invariants: [f64; 4],
}

impl SymplecticSpectrum {
    pub fn is_entangled(&self) -> bool {
        self.ppt_d_minus < 0.5 - PHYSICALITY_TOL
    }
}

fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a * d - b * c
}

/// Symplectic eigenvalues in ascending order, one per mode.
///
/// They are the square roots of the eigenvalues of the symmetric matrix
/// `σ^{1/2} Ωᵀ σ Ω σ^{1/2}`, each of which appears twice; using a
/// symmetric eigenproblem keeps degenerate spectra (pure states) accurate.
pub fn symplectic_eigenvalues(cov: &CovarianceMatrix) -> Result<Vec<f64>> {
    let n = cov.nrows();
    if n == 0 || !n.is_multiple_of(2) || cov.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n + n % 2,
            found: cov.ncols(),
        });
    }
    let eig = cov.clone().symmetric_eigen();
    let scale = max_abs(cov).max(1.0);
    if let Some(neg) = eig
        .eigenvalues
        .iter()
        .copied()
        .find(|&v| v < -STRUCTURAL_TOL * scale)
    {
        return Err(Error::Unphysical(format!(
            "covariance matrix has negative eigenvalue {neg:e}"
        )));
    }
    let root = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    let sqrt_cov = &eig.eigenvectors * root * eig.eigenvectors.transpose();
    let omega = symplectic_form(n / 2);
    let m = &sqrt_cov * omega.transpose() * cov * &omega * &sqrt_cov;
    let m = (&m + m.transpose()) * 0.5;
    let mut d2: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    d2.sort_by(f64::total_cmp);
    Ok(d2
        .chunks(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect())
}

/// Two-mode symplectic spectrum, with and without partial transposition.
pub fn symplectic_spectrum(cov: &CovarianceMatrix) -> Result<SymplecticSpectrum> {
    if cov.nrows() != 4 || cov.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: cov.nrows(),
        });
    }
    let asym = max_abs(&(cov - cov.transpose()));
    if asym > STRUCTURAL_TOL * max_abs(cov).max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let s = |i, j| cov[(i, j)];
    let i1 = det2(s(0, 0), s(0, 1), s(1, 0), s(1, 1));
    let i2 = det2(s(2, 2), s(2, 3), s(3, 2), s(3, 3));
    let i3 = det2(s(0, 2), s(0, 3), s(1, 2), s(1, 3));
    let i4 = cov.determinant();
    let d = symplectic_eigenvalues(cov)?;
    let mut flipped = cov.clone();
    for i in 0..4 {
        if i != 3 {
            flipped[(i, 3)] = -flipped[(i, 3)];
            flipped[(3, i)] = -flipped[(3, i)];
        }
    }
    let ppt = symplectic_eigenvalues(&flipped)?;
    let (d_minus, d_plus, ppt_d_minus, ppt_d_plus) = (d[0], d[1], ppt[0], ppt[1]);
    Ok(SymplecticSpectrum {
        d_plus,
        d_minus,
        ppt_d_plus,
        ppt_d_minus,
        invariants: [i1, i2, i3, i4],
    })
}

fn min_symplectic_eigenvalue(cov: &CovarianceMatrix) -> Result<f64> {
    Ok(symplectic_eigenvalues(cov)?[0])
}

/// `E_N = max{0, −ln(2 d̃−)}`.
pub fn log_negativity(cov: &CovarianceMatrix) -> Result<f64> {
    let spec = symplectic_spectrum(cov)?;
    if spec.ppt_d_minus <= 0.0 {
        return Err(Error::Unphysical(
            "vanishing partially transposed symplectic eigenvalue".into(),
        ));
    }
    Ok((-(2.0 * spec.ppt_d_minus).ln()).max(0.0))
}

/// `μ = (2^M √Det σ)⁻¹`.
pub fn purity(cov: &CovarianceMatrix) -> Result<f64> {
    let det = cov.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularCovariance(det));
    }
    let modes = (cov.nrows() / 2) as i32;
    Ok(1.0 / (2f64.powi(modes) * det.sqrt()))
}

/// Wigner function at a phase-space point.
pub fn wigner_at(state: &GaussianState, point: &QuadratureVector) -> Result<f64> {
    if point.len() != state.mean.len() {
        return Err(Error::DimensionMismatch {
            expected: state.mean.len(),
            found: point.len(),
        });
    }
    let det = state.cov.determinant();
    if !(det > 0.0) {
        return Err(Error::SingularCovariance(det));
    }
    let chol = state
        .cov
        .clone()
        .cholesky()
        .ok_or(Error::SingularCovariance(det))?;
    let dx = point - &state.mean;
    let quad = dx.dot(&chol.solve(&dx));
    let norm = (2.0 * PI).powi(state.modes() as i32) * det.sqrt();
    Ok((-0.5 * quad).exp() / norm)
}

/// Characteristic function `χ(Λ) = exp{−½ ΛᵀΩσΩᵀΛ − i ΛᵀΩ⟨R⟩}`.
pub fn characteristic_function_at(
    state: &GaussianState,
    lam: &QuadratureVector,
) -> Result<Complex64> {
    if lam.len() != state.mean.len() {
        return Err(Error::DimensionMismatch {
            expected: state.mean.len(),
            found: lam.len(),
        });
    }
    let omega = symplectic_form(state.modes());
    let v = omega.transpose() * lam;
    let quad = v.dot(&(&state.cov * &v));
    let phase = lam.dot(&(&omega * &state.mean));
    Ok(Complex64::new(-0.5 * quad, -phase).exp())
}

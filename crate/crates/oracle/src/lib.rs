//! Brute-force reference computations used to validate `dicke-core`:
//! truncated Fock-space construction of single-mode Gaussian states,
//! pure-state Gaussian overlaps, numerical Fisher-information integrals
//! and the closed-form ground-state covariance with forward-mode
//! derivatives.
//!
//! Nothing here is used by the library itself; it exists for tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dicke_core::dicke::DickeParams;
use dicke_core::gaussian::{self, GaussianState};
use dicke_core::measurements::DstsParams;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("Fock truncation at dimension {dim} loses {loss:e} of the trace")]
    Truncation { dim: usize, loss: f64 },
    #[error("state is not pure (purity {0})")]
    NotPure(f64),
    #[error("outcome density integrates to {0}, not 1")]
    NotNormalized(f64),
    #[error("invalid oracle input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Core(#[from] dicke_core::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Truncated density matrix in the Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateMatrix {
    pub dim: usize,
    pub matrix: DMatrix<Complex64>,
}

impl FockStateMatrix {
    /// Photon-number probabilities `⟨n|ρ|n⟩`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|n| self.matrix[(n, n)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.diagonal()
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest eigenvalue of the (Hermitian) matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().min()
    }
}

/// `exp(a)` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = (0..n)
        .map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2f64.powi(squarings);
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(
        dim,
        dim,
        |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 },
    )
}

/// `ρ = D(γ) S(r) ν_th(n̄) S(r)† D(γ)†` truncated to `dim` levels.
///
/// The operators act on a larger working space that is cut down at the
/// end, so edge effects of the truncated generators never reach the
/// returned block.
pub fn build_dsts_fock(params: &DstsParams, dim: usize) -> Result<FockStateMatrix> {
    if dim == 0 {
        return Err(OracleError::InvalidInput(
            "dimension must be positive".into(),
        ));
    }
    let mean_n = params.n_s + params.n_th * (1.0 + 2.0 * params.n_s) + params.gamma.powi(2);
    let work = dim.max((10.0 * mean_n).ceil() as usize + 40) + 40;
    let a = annihilation(work);
    let ad = a.transpose();
    let squeeze = expm(&((&ad * &ad - &a * &a) * (params.r / 2.0)));
    let displace = expm(&((&ad - &a) * params.gamma));
    let nbar = params.n_th;
    let thermal = DMatrix::from_fn(work, work, |i, j| {
        if i != j {
            0.0
        } else if nbar == 0.0 {
            if i == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (i as f64 * (nbar / (1.0 + nbar)).ln()).exp() / (1.0 + nbar)
        }
    });
    let u = &displace * &squeeze;
    let rho = &u * thermal * u.transpose();
    let block = rho.view((0, 0), (dim, dim)).map(|x| Complex64::new(x, 0.0));
    let out = FockStateMatrix { dim, matrix: block };
    let loss = 1.0 - out.trace();
    if loss > 1e-9 {
        return Err(OracleError::Truncation { dim, loss });
    }
    Ok(out)
}

/// [`build_dsts_fock`] with the dimension grown from
/// `max(min_dim, 10⟨N⟩ + 40)` until the truncated trace is within `1e−9`
/// of one.
pub fn build_dsts_fock_adaptive(params: &DstsParams, min_dim: usize) -> Result<FockStateMatrix> {
    let mean_n = params.n_s + params.n_th * (1.0 + 2.0 * params.n_s) + params.gamma.powi(2);
    let mut dim = min_dim.max((10.0 * mean_n).ceil() as usize + 40);
    loop {
        match build_dsts_fock(params, dim) {
            Err(OracleError::Truncation { .. }) if dim < 4096 => dim *= 2,
            other => return other,
        }
    }
}

fn check_pure(state: &GaussianState) -> Result<()> {
    let mu = gaussian::purity(state.cov())?;
    if (mu - 1.0).abs() > 1e-9 {
        return Err(OracleError::NotPure(mu));
    }
    Ok(())
}

fn log_overlap(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    check_pure(s1)?;
    check_pure(s2)?;
    if s1.modes() != s2.modes() {
        return Err(OracleError::InvalidInput("mode numbers differ".into()));
    }
    let sum = s1.cov() + s2.cov();
    let delta = s1.mean() - s2.mean();
    let chol = sum
        .clone()
        .cholesky()
        .ok_or_else(|| OracleError::InvalidInput("σ1 + σ2 is not positive definite".into()))?;
    let log_det: f64 = chol.l().diagonal().iter().map(|x| 2.0 * x.ln()).sum();
    Ok(-0.5 * delta.dot(&chol.solve(&delta)) - 0.5 * log_det)
}

/// `|⟨ψ1|ψ2⟩|² = exp(−½ δᵀ(σ1 + σ2)⁻¹δ) / √det(σ1 + σ2)` for pure states.
pub fn pure_overlap(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    Ok(log_overlap(s1, s2)?.exp())
}

/// Fidelity susceptibility `8 (1 − √overlap) / δλ²` of two pure states
/// separated by `dlam`.
pub fn fidelity_qfi(s1: &GaussianState, s2: &GaussianState, dlam: f64) -> Result<f64> {
    let l = log_overlap(s1, s2)?;
    Ok(-8.0 * (0.5 * l).exp_m1() / (dlam * dlam))
}

/// Nodes and weights of `n`-point Gauss–Hermite quadrature (weight
/// `e^{−y²}`), by the Golub–Welsch eigenvalue method.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            ((i.max(j)) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            (
                eig.eigenvalues[i],
                PI.sqrt() * eig.eigenvectors[(0, i)].powi(2),
            )
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

fn gaussian_pdf(x: f64, mean: f64, var: f64) -> f64 {
    (-(x - mean).powi(2) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
}

fn central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = (f(x + h / 2.0) - f(x - h / 2.0)) / h;
    (4.0 * d2 - d1) / 3.0
}

/// Fisher information `∫ (∂λ ln p)² p dx` of a Gaussian outcome density
/// with moments `moments(λ) = (mean, variance)`. The score is obtained by
/// differentiating `ln p(x; λ)` numerically at every quadrature node.
pub fn fi_gaussian_outcomes<F>(moments: F, lam: f64, h: f64, nodes: usize) -> Result<f64>
where
    F: Fn(f64) -> (f64, f64),
{
    let (m, v) = moments(lam);
    if !(v > 0.0) {
        return Err(OracleError::InvalidInput(format!("variance {v}")));
    }
    let (y, w) = gauss_hermite(nodes);
    let scale = (2.0 * v).sqrt();
    let mut norm = 0.0;
    let mut fi = 0.0;
    for (yi, wi) in y.iter().zip(&w) {
        let x = m + scale * yi;
        let p = gaussian_pdf(x, m, v);
        // ∫ f p dx = Σ w_i f(x_i) p(x_i) / (p(x_i) e^{y_i²}) · scale
        let jac = scale * (yi * yi).exp();
        norm += wi * jac * p;
        let score = central(
            |l| {
                let (ml, vl) = moments(l);
                gaussian_pdf(x, ml, vl).ln()
            },
            lam,
            h,
        );
        fi += wi * jac * p * score * score;
    }
    if (norm - 1.0).abs() > 1e-6 {
        return Err(OracleError::NotNormalized(norm));
    }
    Ok(fi)
}

/// Fisher information `∫ (∂λ p)²/p dx` of an arbitrary density by the
/// trapezoid rule on `[lo, hi]`.
pub fn fi_continuous<F>(
    density: F,
    lam: f64,
    h: f64,
    lo: f64,
    hi: f64,
    points: usize,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if points < 3 || !(hi > lo) {
        return Err(OracleError::InvalidInput("bad integration grid".into()));
    }
    let dx = (hi - lo) / (points - 1) as f64;
    let mut norm = 0.0;
    let mut fi = 0.0;
    for i in 0..points {
        let x = lo + i as f64 * dx;
        let wt = if i == 0 || i == points - 1 {
            0.5 * dx
        } else {
            dx
        };
        let p = density(lam, x);
        norm += wt * p;
        if p > 0.0 {
            let dp = central(|l| density(l, x), lam, h);
            fi += wt * dp * dp / p;
        }
    }
    if (norm - 1.0).abs() > 1e-6 {
        return Err(OracleError::NotNormalized(norm));
    }
    Ok(fi)
}

/// Fisher information `Σ (∂λ p)²/p` of a discrete distribution.
pub fn fi_discrete<F>(pmf: F, lam: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Vec<f64>,
{
    let p0 = pmf(lam);
    let total: f64 = p0.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(OracleError::NotNormalized(total));
    }
    let (pp1, pm1, pph, pmh) = (
        pmf(lam + h),
        pmf(lam - h),
        pmf(lam + h / 2.0),
        pmf(lam - h / 2.0),
    );
    let mut fi = 0.0;
    for n in 0..p0.len() {
        if p0[n] <= 0.0 {
            continue;
        }
        let d1 = (pp1[n] - pm1[n]) / (2.0 * h);
        let d2 = (pph[n] - pmh[n]) / h;
        let d = (4.0 * d2 - d1) / 3.0;
        fi += d * d / p0[n];
    }
    Ok(fi)
}

/// Poisson probabilities `e^{−μ} μⁿ / n!` for `n = 0..=n_max`.
pub fn poisson(mu: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_fact = 0.0;
    for n in 0..=n_max {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        out.push(if mu == 0.0 {
            if n == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-mu + n as f64 * mu.ln() - log_fact).exp()
        });
    }
    out
}

/// Value and first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: f64,
    pub eps: f64,
}

impl Dual {
    pub fn constant(re: f64) -> Self {
        Self { re, eps: 0.0 }
    }

    pub fn variable(re: f64) -> Self {
        Self { re, eps: 1.0 }
    }

    pub fn sqrt(self) -> Self {
        let s = self.re.sqrt();
        Self {
            re: s,
            eps: self.eps / (2.0 * s),
        }
    }

    pub fn sin(self) -> Self {
        Self {
            re: self.re.sin(),
            eps: self.eps * self.re.cos(),
        }
    }

    pub fn cos(self) -> Self {
        Self {
            re: self.re.cos(),
            eps: -self.eps * self.re.sin(),
        }
    }

    pub fn atan2(self, x: Self) -> Self {
        let r2 = self.re * self.re + x.re * x.re;
        Self {
            re: self.re.atan2(x.re),
            eps: (x.re * self.eps - self.re * x.eps) / r2,
        }
    }

    pub fn powi(self, n: i32) -> Self {
        Self {
            re: self.re.powi(n),
            eps: n as f64 * self.re.powi(n - 1) * self.eps,
        }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            eps: self.re * o.eps + self.eps * o.re,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual {
            re: self.re / o.re,
            eps: (self.eps * o.re - self.re * o.eps) / (o.re * o.re),
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

impl Mul<Dual> for f64 {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::constant(self) * o
    }
}

/// Ground-state moments with their `λ`-derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormMoments {
    pub cov: DMatrix<f64>,
    pub dcov: DMatrix<f64>,
    pub mean: DVector<f64>,
    pub dmean: DVector<f64>,
}

/// Evaluates the textbook closed forms of the six independent covariance
/// entries and the displacement, carrying `∂/∂λ` along in dual numbers.
/// Uses the direct expressions for `ε±`, so it loses accuracy very close
/// to `λc`.
pub fn closed_form_moments(params: &DickeParams) -> ClosedFormMoments {
    let w = Dual::constant(params.omega);
    let w0 = Dual::constant(params.omega0);
    let lam = Dual::variable(params.lam);
    let n = Dual::constant(params.n_atoms as f64);
    let one = Dual::constant(1.0);
    let two = Dual::constant(2.0);
    let lc = (w * w0).sqrt() / two;
    let superradiant = params.lam > lc.re;
    let k = if superradiant {
        (lc / lam).powi(2)
    } else {
        one
    };
    let (alpha, beta) = if superradiant {
        ((lam / w) * (one - k * k).sqrt(), ((one - k) / two).sqrt())
    } else {
        (Dual::constant(0.0), Dual::constant(0.0))
    };
    let wt = w0 * (one + k) / (two * k);
    let a = w * w + (w0 / k).powi(2);
    let b = ((w0 / k).powi(2) - w * w).powi(2) + 16.0 * lam * lam * w * w0 * k;
    let eps_p = ((a + b.sqrt()) / two).sqrt();
    let eps_m = ((a - b.sqrt()) / two).sqrt();
    let theta = (4.0 * lam * (w * w0 * k).sqrt() * k * k).atan2(w0 * w0 - k * k * w * w) / two;
    let (c2, s2) = (theta.cos().powi(2), theta.sin().powi(2));
    let sin2t = (two * theta).sin();
    let half = Dual::constant(0.5);
    let s11 = w * half * (c2 / eps_m + s2 / eps_p);
    let s22 = half / w * (eps_m * c2 + eps_p * s2);
    let s33 = wt * half * (c2 / eps_p + s2 / eps_m);
    let s44 = half / wt * (eps_p * c2 + eps_m * s2);
    let root = (w * wt).sqrt();
    let s13 = root * sin2t / Dual::constant(4.0) * (one / eps_p - one / eps_m);
    let s24 = -(sin2t / (Dual::constant(4.0) * root)) * (eps_m - eps_p);
    let zero = Dual::constant(0.0);
    let entries = [
        [s11, zero, s13, zero],
        [zero, s22, zero, s24],
        [s13, zero, s33, zero],
        [zero, s24, zero, s44],
    ];
    let r2n = (two * n).sqrt();
    let mean = [alpha * r2n, zero, -(beta * r2n), zero];
    ClosedFormMoments {
        cov: DMatrix::from_fn(4, 4, |i, j| entries[i][j].re),
        dcov: DMatrix::from_fn(4, 4, |i, j| entries[i][j].eps),
        mean: DVector::from_fn(4, |i, _| mean[i].re),
        dmean: DVector::from_fn(4, |i, _| mean[i].eps),
    }
}

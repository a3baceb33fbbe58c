//! Photon-number statistics of a single-mode displaced squeezed thermal
//! state (diagonal covariance, real displacement along `x`), and the
//! Fisher information of photon counting on the radiation mode.
//!
//! With `d = (1 + 2σ11)(1 + 2σ22)`:
//!
//! ```text
//! R00 = 2 exp(−⟨x⟩²/(1 + 2σ11)) / √d
//! Ã   = (4 σ11 σ22 − 1) / d
//! B̃   = 2 (σ22 − σ11) / d
//! C̃   = √2 ⟨x⟩ / (1 + 2σ11)
//!
//! p(n) = R00 Σ_k C(2k, k) ((Ã + B̃)/4)^k · b(n − k)
//! b(m) = (Ã − B̃)^m H_2m(i C̃ / (2√(Ã − B̃))) (−1)^m / (2^2m m!)
//! ```
//!
//! `b(m)` comes from the three-term Hermite recurrence, normalised so that
//! it stays `O(1)`, and carried with an explicit binary exponent. The
//! convolution is summed in log-magnitude/sign form with compensated
//! accumulation, so neither overflow nor underflow of individual terms
//! matters.

use std::f64::consts::{LN_2, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::diagonal_moments;
use crate::derivative::{richardson_combine, stencil};
use crate::dicke::{self, DickeParams};
use crate::gaussian::{self, GaussianState, PHYSICALITY_TOL};
use crate::qfi::checked_step;
use crate::{Error, Result};

/// Largest photon number the series will ever be extended to.
pub const HARD_CUTOFF: usize = 100_000;
/// Default tail tolerance of [`Cutoff::Tail`].
pub const DEFAULT_TAIL: f64 = 1e-10;
/// `p(n)` below this are left out of the Fisher-information sum.
pub const MIN_PROBABILITY: f64 = 1e-14;
/// `p(n)` below this is reported as a numerical breakdown.
pub const BREAKDOWN: f64 = -1e-9;

const RESCALE_BITS: i32 = 600;

/// Displaced squeezed thermal state parameters `(n̄, r, n_s, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DstsParams {
    pub n_th: f64,
    pub r: f64,
    /// `sinh² r`
    pub n_s: f64,
    pub gamma: f64,
}

impl DstsParams {
    pub fn new(n_th: f64, r: f64, gamma: f64) -> Result<Self> {
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "thermal occupation must be finite and >= 0, got {n_th}"
            )));
        }
        if !r.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "squeezing {r} and displacement {gamma} must be finite"
            )));
        }
        Ok(Self {
            n_th,
            r,
            n_s: r.sinh().powi(2),
            gamma,
        })
    }

    /// `σ = (n̄ + ½) diag(e^{2r}, e^{−2r})`, `⟨R⟩ = (√2 γ, 0)`.
    pub fn to_state(&self) -> Result<GaussianState> {
        let v = self.n_th + 0.5;
        let e = (2.0 * self.r).exp();
        GaussianState::new(
            DVector::from_vec(vec![SQRT_2 * self.gamma, 0.0]),
            DMatrix::from_diagonal(&DVector::from_vec(vec![v * e, v / e])),
        )
    }
}

fn check_real_displacement(state: &GaussianState) -> Result<()> {
    let m = state.mean();
    if m[1].abs() > 1e-12 * (1.0 + m[0].abs()) {
        return Err(Error::InvalidParameter(format!(
            "photon statistics need ⟨p⟩ = 0, got {}",
            m[1]
        )));
    }
    Ok(())
}

/// Thermal occupation, squeezing and displacement of a one-mode state
/// with diagonal covariance.
pub fn dsts_params(state: &GaussianState) -> Result<DstsParams> {
    let (s11, s22) = diagonal_moments(state)?;
    check_real_displacement(state)?;
    let g = (s11 * s22).sqrt();
    if !(g >= 0.5 - PHYSICALITY_TOL) {
        return Err(Error::Unphysical(format!(
            "√(σ11 σ22) = {g} is below the vacuum limit 1/2"
        )));
    }
    let r = 0.25 * (s11 / s22).ln();
    Ok(DstsParams {
        n_th: (g - 0.5).max(0.0),
        r,
        n_s: r.sinh().powi(2),
        gamma: state.mean()[0] / SQRT_2,
    })
}

/// `⟨N⟩ = n_s + n̄(1 + 2 n_s) + γ²`, split into its three contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanPhotonDecomposition {
    pub squeezing: f64,
    pub thermal: f64,
    pub coherent: f64,
    pub total: f64,
}

pub fn mean_photon_decomposition(state: &GaussianState) -> Result<MeanPhotonDecomposition> {
    let d = dsts_params(state)?;
    let thermal = d.n_th * (1.0 + 2.0 * d.n_s);
    let coherent = d.gamma * d.gamma;
    Ok(MeanPhotonDecomposition {
        squeezing: d.n_s,
        thermal,
        coherent,
        total: d.n_s + thermal + coherent,
    })
}

/// `(R00, Ã, B̃, C̃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonNumberKernel {
    pub r00: f64,
    pub a_tilde: f64,
    pub b_tilde: f64,
    pub c_tilde: f64,
}

impl PhotonNumberKernel {
    pub fn from_state(state: &GaussianState) -> Result<Self> {
        dsts_params(state)?;
        let (s11, s22) = diagonal_moments(state)?;
        let x = state.mean()[0];
        let d = (1.0 + 2.0 * s11) * (1.0 + 2.0 * s22);
        Ok(Self {
            r00: 2.0 * (-x * x / (1.0 + 2.0 * s11)).exp() / d.sqrt(),
            a_tilde: (4.0 * s11 * s22 - 1.0) / d,
            b_tilde: 2.0 * (s22 - s11) / d,
            c_tilde: SQRT_2 * x / (1.0 + 2.0 * s11),
        })
    }
}

/// Signed logarithm: `value = sign · exp(log)`; zero has `log = −∞`.
#[derive(Debug, Clone, Copy)]
struct LogValue {
    log: f64,
    sign: f64,
}

impl LogValue {
    fn from_scaled(mantissa: f64, exponent: i32) -> Self {
        if mantissa == 0.0 {
            return Self {
                log: f64::NEG_INFINITY,
                sign: 0.0,
            };
        }
        Self {
            log: mantissa.abs().ln() + f64::from(exponent) * LN_2,
            sign: mantissa.signum(),
        }
    }
}

/// Neumaier-compensated sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Incrementally extended photon-number series of one state. Each call to
/// [`PhotonSeries::next_probability`] costs `O(n)`.
#[derive(Debug, Clone)]
pub struct PhotonSeries {
    kernel: PhotonNumberKernel,
    log_r00: f64,
    t: f64,
    // real recurrence state: e_{j-1}, e_j in units of 2^(RESCALE_BITS·scale)
    e_prev: f64,
    e_cur: f64,
    scale: i32,
    j: usize,
    rho: f64,
    a: Vec<LogValue>,
    b: Vec<LogValue>,
    a_step: (f64, f64),
    probs: Vec<f64>,
    total: CompensatedSum,
}

impl PhotonSeries {
    pub fn new(state: &GaussianState) -> Result<Self> {
        let kernel = PhotonNumberKernel::from_state(state)?;
        let (s11, s22) = diagonal_moments(state)?;
        let x = state.mean()[0];
        let d = (1.0 + 2.0 * s11) * (1.0 + 2.0 * s22);
        let u = kernel.a_tilde + kernel.b_tilde;
        let quarter = u / 4.0;
        Ok(Self {
            kernel,
            log_r00: LN_2 - x * x / (1.0 + 2.0 * s11) - 0.5 * d.ln(),
            t: kernel.a_tilde - kernel.b_tilde,
            e_prev: 0.0,
            e_cur: 1.0,
            scale: 0,
            j: 0,
            rho: 2.0 / PI.sqrt(),
            a: vec![LogValue {
                log: 0.0,
                sign: 1.0,
            }],
            b: vec![LogValue {
                log: 0.0,
                sign: 1.0,
            }],
            a_step: (
                if quarter == 0.0 {
                    f64::NEG_INFINITY
                } else {
                    quarter.abs().ln()
                },
                quarter.signum(),
            ),
            probs: Vec::new(),
            total: CompensatedSum::default(),
        })
    }

    pub fn kernel(&self) -> &PhotonNumberKernel {
        &self.kernel
    }

    fn advance_recurrence(&mut self) {
        let j = self.j as f64;
        let next =
            self.kernel.c_tilde * self.rho * self.e_cur + j * self.t / (j + 1.0) * self.e_prev;
        self.e_prev = self.e_cur;
        self.e_cur = next;
        self.rho = 1.0 / ((j / 2.0 + 1.0) * self.rho);
        self.j += 1;
        let big = 2f64.powi(RESCALE_BITS);
        let m = self.e_cur.abs().max(self.e_prev.abs());
        if m > big {
            self.e_cur /= big;
            self.e_prev /= big;
            self.scale += 1;
        } else if m > 0.0 && m < 1.0 / big {
            self.e_cur *= big;
            self.e_prev *= big;
            self.scale -= 1;
        }
    }

    fn extend_tables(&mut self, n: usize) {
        while self.b.len() <= n {
            self.advance_recurrence();
            self.advance_recurrence();
            self.b
                .push(LogValue::from_scaled(self.e_cur, self.scale * RESCALE_BITS));
        }
        while self.a.len() <= n {
            let k = self.a.len() as f64;
            let last = *self.a.last().expect("a_0 is always present");
            let (log_q, sign_q) = self.a_step;
            self.a.push(LogValue {
                log: last.log + ((2.0 * k) * (2.0 * k - 1.0) / (k * k)).ln() + log_q,
                sign: last.sign * sign_q,
            });
        }
    }

    /// Computes and stores `p(n)` for the next `n`.
    pub fn next_probability(&mut self) -> Result<f64> {
        let n = self.probs.len();
        if n > HARD_CUTOFF {
            return Err(Error::CutoffOverflow { limit: HARD_CUTOFF });
        }
        self.extend_tables(n);
        let terms = || (0..=n).map(|k| (self.a[k], self.b[n - k]));
        let max = terms()
            .map(|(a, b)| a.log + b.log)
            .fold(f64::NEG_INFINITY, f64::max);
        let p = if max == f64::NEG_INFINITY {
            0.0
        } else {
            let mut acc = CompensatedSum::default();
            for (a, b) in terms() {
                let l = a.log + b.log;
                if l > f64::NEG_INFINITY {
                    acc.add(a.sign * b.sign * (l - max).exp());
                }
            }
            let s = acc.value();
            if s == 0.0 {
                0.0
            } else {
                s.signum() * (self.log_r00 + max + s.abs().ln()).exp()
            }
        };
        if !p.is_finite() || p < BREAKDOWN {
            return Err(Error::NumericalBreakdown { n, value: p });
        }
        self.probs.push(p);
        self.total.add(p);
        Ok(p)
    }

    /// Extends the series up to and including `n`.
    pub fn extend_to(&mut self, n: usize) -> Result<()> {
        if n > HARD_CUTOFF {
            return Err(Error::CutoffOverflow { limit: HARD_CUTOFF });
        }
        while self.probs.len() <= n {
            self.next_probability()?;
        }
        Ok(())
    }

    /// Extends until the missing mass `1 − Σp` falls below `tol`.
    pub fn extend_until_tail(&mut self, tol: f64) -> Result<()> {
        if self.probs.is_empty() {
            self.next_probability()?;
        }
        while self.tail_mass() >= tol {
            if self.probs.len() > HARD_CUTOFF {
                return Err(Error::CutoffOverflow { limit: HARD_CUTOFF });
            }
            self.next_probability()?;
        }
        Ok(())
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// `1 − Σ p(n)` over the computed terms, floored at zero.
    pub fn tail_mass(&self) -> f64 {
        (1.0 - self.total.value()).max(0.0)
    }

    pub fn into_distribution(self) -> PhotonDistribution {
        let tail_mass = self.tail_mass();
        PhotonDistribution {
            n_max: self.probs.len().saturating_sub(1),
            probs: self.probs,
            tail_mass,
        }
    }
}

/// Where to stop the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cutoff {
    /// `p(0..=n)`.
    Fixed(usize),
    /// Smallest `n_max` with `1 − Σp < tol`.
    Tail(f64),
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff::Tail(DEFAULT_TAIL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonDistribution {
    /// `p(0..=n_max)`
    pub probs: Vec<f64>,
    pub n_max: usize,
    /// `1 − Σ p(n)`, floored at zero.
    pub tail_mass: f64,
}

impl PhotonDistribution {
    pub fn mean(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for (n, p) in self.probs.iter().enumerate() {
            acc.add(n as f64 * p);
        }
        acc.value()
    }

    pub fn total(&self) -> f64 {
        let mut acc = CompensatedSum::default();
        for p in &self.probs {
            acc.add(*p);
        }
        acc.value()
    }
}

/// Photon-number distribution of a one-mode state with diagonal
/// covariance and `⟨p⟩ = 0`.
pub fn photon_distribution(state: &GaussianState, cutoff: Cutoff) -> Result<PhotonDistribution> {
    let mut series = PhotonSeries::new(state)?;
    match cutoff {
        Cutoff::Fixed(n) => series.extend_to(n)?,
        Cutoff::Tail(tol) => {
            if !(tol > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tail tolerance must be positive, got {tol}"
                )));
            }
            series.extend_until_tail(tol)?;
        }
    }
    Ok(series.into_distribution())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonCountingFi {
    pub fi: f64,
    /// Shared cutoff of every distribution in the stencil.
    pub n_max: usize,
    /// Largest missing mass over the stencil.
    pub tail: f64,
    pub step: f64,
}

/// Photon-counting Fisher information `Σ (∂p)²/p` of a one-parameter
/// family of one-mode states, differentiated at `x` with step `h`.
pub fn fi_photon_counting_family<F>(family: F, x: f64, h: f64) -> Result<PhotonCountingFi>
where
    F: Fn(f64) -> Result<GaussianState>,
{
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let points = stencil(x, h);
    let mut series = Vec::with_capacity(5);
    series.push(PhotonSeries::new(&family(x)?)?);
    for &p in &points {
        series.push(PhotonSeries::new(&family(p)?)?);
    }
    for s in series.iter_mut() {
        s.extend_until_tail(DEFAULT_TAIL)?;
    }
    let n_max = series
        .iter()
        .map(|s| s.probabilities().len() - 1)
        .max()
        .expect("stencil is non-empty");
    for s in series.iter_mut() {
        s.extend_to(n_max)?;
    }
    let tail = series
        .iter()
        .map(PhotonSeries::tail_mass)
        .fold(0.0, f64::max);
    if tail >= DEFAULT_TAIL {
        return Err(Error::NonConvergedSeries { n_max, tail });
    }
    let at = |i: usize| &series[i].probabilities()[..=n_max];
    let dp = richardson_combine(at(1), at(2), at(3), at(4), h)?;
    let mut acc = CompensatedSum::default();
    for (p, d) in at(0).iter().zip(&dp) {
        if *p >= MIN_PROBABILITY {
            acc.add(d * d / p);
        }
    }
    Ok(PhotonCountingFi {
        fi: acc.value(),
        n_max,
        tail,
        step: h,
    })
}

/// Fisher information of photon counting on the radiation mode of the
/// Dicke ground state.
pub fn fi_photon_counting(params: &DickeParams) -> Result<PhotonCountingFi> {
    let h = checked_step(params, None)?;
    fi_photon_counting_family(
        |lam| {
            let state = dicke::ground_state_unchecked(&params.with_lambda(lam))?;
            gaussian::partial_trace(&state, &[0])
        },
        params.lam,
        h,
    )
}

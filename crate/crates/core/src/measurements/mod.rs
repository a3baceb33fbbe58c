//! Fisher information of local probes on one subsystem of the ground state:
//! homodyne detection of a quadrature and photon counting on the radiation
//! mode.

pub mod homodyne;
pub mod photon;

pub use homodyne::{fi_homodyne, quadrature_distribution, HomodyneSetting, Subsystem};
pub use photon::{
    dsts_params, fi_photon_counting, fi_photon_counting_family, mean_photon_decomposition,
    photon_distribution, Cutoff, DstsParams, MeanPhotonDecomposition, PhotonCountingFi,
    PhotonDistribution, PhotonNumberKernel, PhotonSeries,
};

use crate::gaussian::GaussianState;
use crate::{Error, Result};

/// Off-diagonal entries below this fraction of the diagonal count as zero.
const DIAGONAL_TOL: f64 = 1e-12;

/// `(σ11, σ22)` of a single-mode state whose covariance is diagonal.
pub(crate) fn diagonal_moments(state: &GaussianState) -> Result<(f64, f64)> {
    if state.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: state.mean().len(),
        });
    }
    let cov = state.cov();
    let (s11, s22, s12) = (cov[(0, 0)], cov[(1, 1)], cov[(0, 1)]);
    if s12.abs() > DIAGONAL_TOL * s11.abs().max(s22.abs()) {
        return Err(Error::NonDiagonal(s12));
    }
    Ok((s11, s22))
}

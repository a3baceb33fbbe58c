//! Gaussian ground states of the Dicke model across the superradiant
//! transition, with the quantum Fisher information of the coupling constant
//! and the Fisher information of local homodyne and photon-counting probes.
//!
//! Conventions used everywhere in the crate:
//!
//! - quadratures are ordered `(x1, p1, x2, p2, ...)`;
//! - `ħ = 1`, so the vacuum covariance matrix is `I / 2`;
//! - in the Dicke model mode 1 is the radiation field and mode 2 the
//!   Holstein–Primakoff boson of the atomic ensemble.
//!
//! ```
//! use dicke_core::{dicke::DickeParams, qfi};
//!
//! let params = DickeParams::resonant(0.3);
//! let h = qfi::qfi(&params).unwrap();
//! assert!(h.qfi > 0.0);
//! assert_eq!(h.displacement_term, 0.0);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod derivative;
pub mod dicke;
pub mod error;
pub mod fit;
pub mod gaussian;
pub mod measurements;
pub mod qfi;

pub use error::{Error, Result};

//! KP multi-line solitons from soliton data: phases, τ-function, the field
//! u, the Darboux dressing operator and the Sato divisor.

mod darboux;
mod data;
mod real;
mod tau;

pub use darboux::{apply_darboux, darboux_annihilation_ratio, darboux_coefficients, sato_divisor, DarbouxState, SatoDivisor};
pub use data::{theta, ExpSum, SolitonData, TauTerm, Times};
pub use real::{Precision, Real, ScaledValue};
pub use tau::{kp_residual, log_tau_derivatives, tau_minorsum, tau_wronskian, u_field, LogTauDerivatives, FD_STEP};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolitonError {
    #[error("invalid phases: {0}")]
    Phases(String),
    #[error("the point is not totally non-negative")]
    NotTotallyNonnegative,
    #[error("tau is not positive at t = {t:?}")]
    Regularity { t: Times },
    #[error("Darboux system is singular at t = {t:?}")]
    Singular { t: Times },
    #[error("Sato divisor property violated: {0}")]
    SatoProperty(String),
    #[error("unsupported precision of {0} bits (at most 106)")]
    Precision(u32),
}

/// [`darboux_coefficients`] at the scalar type selected by `prec`.
pub fn darboux_at(prec: Precision, sd: &SolitonData, t: &Times) -> Result<DarbouxState, SolitonError> {
    match prec {
        Precision::Double => darboux_coefficients::<f64>(sd, t),
        Precision::DoubleDouble => darboux_coefficients::<twofloat::TwoFloat>(sd, t),
    }
}

/// [`sato_divisor`] at the scalar type selected by `prec`.
pub fn sato_at(prec: Precision, sd: &SolitonData, t0: &Times) -> Result<SatoDivisor, SolitonError> {
    match prec {
        Precision::Double => sato_divisor::<f64>(sd, t0),
        Precision::DoubleDouble => sato_divisor::<twofloat::TwoFloat>(sd, t0),
    }
}

//! Edge wave functions on N′, the choice of the normalisation time, network
//! divisor numbers, their placement on the curve and the oval counting laws.

mod analysis;
mod assemble;
mod waves;
mod xi;

pub use analysis::{DivisorAnalysis, DivisorChecks};
pub use assemble::{
    assemble_divisors, darboux_oval, kp_oval_check, parity_check, wave_on_curve, CurveDivisor, DivisorKind, DivisorPoint, Divisors,
    OvalCount, OvalCountReport, OvalParity, ParityReport,
};
pub use waves::{
    choose_t0, divisor_numbers, edge_waves, DivisorEntry, DressingFactor, EdgeWaveField, NetworkDivisor, T0Choice, T0Options,
    WaveEvaluator, WaveVariant,
};
pub use xi::{gr24_xi_divisor, gr24_xi_from_values, XiDivisor};

use thiserror::Error;

use crate::curve::CurveError;
use crate::soliton::SolitonError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DivisorError {
    #[error("no admissible initial time with x0 <= {max_x}; try a larger bound or --precision 106")]
    T0Search { max_x: f64 },
    #[error("vanishing denominator at {0}")]
    Degenerate(String),
    #[error("divisor degree mismatch: {0}")]
    Degree(String),
    #[error("pole of the wave function on {component} at zeta = {zeta}")]
    Pole { component: String, zeta: f64 },
    #[error("wave function undefined: {0}")]
    Undefined(String),
    #[error(transparent)]
    Soliton(#[from] SolitonError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[cfg(test)]
mod tests;

//! KP divisor of the Gr(2,4) top cell on the ξ-family of curves compared with
//! the divisor on the reduced-network curve.

use serde::Serialize;

use super::DivisorError;
use super::DressingFactor;
use crate::catalog;
use crate::soliton::{theta, SolitonData, Times};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiDivisor {
    pub xi: f64,
    /// ζ̃ coordinates on Γ1(ξ) and Γ2(ξ).
    pub zeta_tilde_1: f64,
    pub zeta_tilde_2: f64,
    /// The same points in the ζ coordinate.
    pub zeta_1: f64,
    pub zeta_2: f64,
    /// Dressed divisor points of the reduced-network curve.
    pub zeta_dr13: f64,
    pub zeta_dr23: f64,
}

impl XiDivisor {
    /// |ζ(P_{1,ξ}) − ζ(P_23)|, zero up to rounding.
    pub fn first_gap(&self) -> f64 {
        (self.zeta_1 - self.zeta_dr23).abs()
    }

    /// |ζ(P_{2,ξ}) − ζ(P_13)|, of order 1/ξ.
    pub fn second_gap(&self) -> f64 {
        (self.zeta_2 - self.zeta_dr13).abs()
    }
}

/// ζ from ζ̃ = ξ² / ((1 − ξ²) ζ − 1).
fn zeta_of_tilde(zt: f64, xi: f64) -> f64 {
    let x2 = xi * xi;
    (x2 / zt + 1.0) / (1.0 - x2)
}

/// Closed forms given d2 ∝ 𝔇e^{θ2}(t0), d3 ∝ 𝔇e^{θ3}(t0) (any common factor).
pub fn gr24_xi_from_values(w: [f64; 4], d2: f64, d3: f64, xi: f64) -> XiDivisor {
    let [_, w14, w23, w24] = w;
    let x2 = xi * xi;
    let zt1 = -x2 * d2 / (x2 * d2 + w23 * (x2 - 1.0) * d3);
    let num = -xi.powi(3) * (xi - 1.0) * ((w14 + w24) * d2 + w14 * w23 * d3);
    // the last term carries 𝔇e^{θ2}, not the bare exponential
    let den = w23 * (xi - 1.0) * (w14 * (xi.powi(3) + xi + 1.0) + w24 * (1.0 - x2)) * d3 + x2 * ((x2 - 1.0) * w14 + (1.0 - xi) * w24) * d2;
    let zt2 = num / den;
    XiDivisor {
        xi,
        zeta_tilde_1: zt1,
        zeta_tilde_2: zt2,
        zeta_1: zeta_of_tilde(zt1, xi),
        zeta_2: zeta_of_tilde(zt2, xi),
        zeta_dr13: w14 * (d2 + w23 * d3) / ((w14 + w24) * d2 + w23 * w14 * d3),
        zeta_dr23: 1.0 + w23 * d3 / d2,
    }
}

/// Evaluates the Darboux operator of the Gr(2,4) point with weights
/// (w13, w14, w23, w24) at t0, then the closed forms.
pub fn gr24_xi_divisor(kappa: [f64; 4], w: [f64; 4], xi: f64, t0: &Times) -> Result<XiDivisor, DivisorError> {
    let q = |v: f64| num_rational::BigRational::from_float(v).expect("finite weight");
    let tab = catalog::gr24(q(w[0]), q(w[1]), q(w[2]), q(w[3]));
    let sd = SolitonData::from_tableau(kappa.to_vec(), &tab)?;
    let pi = DressingFactor::new(&sd, t0);
    let top = theta(kappa[1], t0).max(theta(kappa[2], t0));
    let d = |j: usize| pi.eval(kappa[j]) * (theta(kappa[j], t0) - top).exp();
    Ok(gr24_xi_from_values(w, d(1), d(2), xi))
}

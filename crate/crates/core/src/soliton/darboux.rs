use serde::Serialize;

use super::real::{back_substitute, eliminate};
use super::tau::{derivative_table, stable_rows};
use super::{theta, ExpSum, Real, SolitonData, SolitonError, Times};
use crate::algebra::{real_roots, RealPoly};

/// Coefficients of 𝔇 = ∂^k − 𝔴_1 ∂^{k−1} − … − 𝔴_k at a fixed time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DarbouxState {
    pub t: Times,
    pub w: Vec<f64>,
    /// Largest relative residual of the defining system.
    pub residual: f64,
}

impl DarbouxState {
    pub fn k(&self) -> usize {
        self.w.len()
    }

    /// ζ^k − 𝔴_1 ζ^{k−1} − … − 𝔴_k.
    pub fn char_poly(&self) -> RealPoly {
        RealPoly::new(std::iter::once(1.0).chain(self.w.iter().map(|w| -w)).collect())
    }

    pub fn char_eval(&self, zeta: f64) -> f64 {
        self.w.iter().fold(1.0, |acc, w| acc * zeta - w)
    }
}

/// Relative pivot size below which the system is declared singular.
const SINGULAR_RATIO: f64 = 1e-13;

pub fn darboux_coefficients<R: Real>(sd: &SolitonData, t: &Times) -> Result<DarbouxState, SolitonError> {
    let k = sd.k();
    let table = derivative_table(sd, &stable_rows::<R>(sd, t).rows, k);
    let mut a: Vec<Vec<R>> = table.iter().map(|row| (1..=k).map(|m| row[k - m]).collect()).collect();
    let mut b: Vec<R> = table.iter().map(|row| row[k]).collect();
    let (_, ratio) = eliminate(&mut a, Some(&mut b));
    if !(ratio > SINGULAR_RATIO) {
        return Err(SolitonError::Singular { t: t.clone() });
    }
    let w = back_substitute(&a, &b);
    let mut residual = 0.0f64;
    for row in &table {
        let lhs = (1..=k).fold(R::zero(), |acc, m| acc + w[m - 1] * row[k - m]);
        let scale = (0..=k).fold(0.0f64, |s, p| s.max(row[p].abs().to_f64()));
        residual = residual.max((lhs - row[k]).abs().to_f64() / scale.max(f64::MIN_POSITIVE));
    }
    Ok(DarbouxState {
        t: t.clone(),
        w: w.into_iter().map(Real::to_f64).collect(),
        residual,
    })
}

/// Σ_j c_j π(κ_j) e^{θ_j(t)}.
pub fn apply_darboux(v: &ExpSum, ds: &DarbouxState, kappa: &[f64]) -> f64 {
    v.coeffs
        .iter()
        .zip(kappa)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, &k)| c * ds.char_eval(k) * theta(k, &ds.t).exp())
        .sum()
}

/// |𝔇 v| relative to Σ_j |c_j| (Σ_m |𝔴_m| |κ_j|^{k−m}) e^{θ_j}, with 𝔴_0 = 1;
/// zero when v is annihilated.
pub fn darboux_annihilation_ratio(v: &ExpSum, ds: &DarbouxState, kappa: &[f64]) -> f64 {
    let terms: Vec<(f64, f64, f64)> = v
        .coeffs
        .iter()
        .zip(kappa)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, &k)| {
            let size = ds.w.iter().fold(1.0, |acc, w| acc * k.abs() + w.abs());
            (c * ds.char_eval(k), c.abs() * size, theta(k, &ds.t))
        })
        .collect();
    let m = terms.iter().map(|t| t.2).fold(f64::NEG_INFINITY, f64::max);
    let (mut s, mut mag) = (0.0, 0.0);
    for (c, size, th) in terms {
        let e = (th - m).exp();
        s += c * e;
        mag += size * e;
    }
    if mag == 0.0 {
        0.0
    } else {
        s.abs() / mag
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SatoDivisor {
    pub t0: Times,
    /// Reduced Sato divisor, sorted.
    pub roots: Vec<f64>,
    /// Phases κ_{i_r} of pivot-only rows removed by deflation.
    pub stripped: Vec<f64>,
    pub darboux: DarbouxState,
}

/// Roots of the characteristic polynomial at t0, with the phases of
/// pivot-only rows divided out.
pub fn sato_divisor<R: Real>(sd: &SolitonData, t0: &Times) -> Result<SatoDivisor, SolitonError> {
    let ds = darboux_coefficients::<R>(sd, t0)?;
    let kappa = sd.kappa();
    let (lo, hi) = (kappa[0], kappa[kappa.len() - 1]);
    let mut coeffs = ds.char_poly().coeffs().to_vec();
    let mut stripped = Vec::new();
    for &(_, i) in sd.pivot_only_rows() {
        let z = kappa[i - 1];
        // synthetic division by (ζ − z)
        let mut q = Vec::with_capacity(coeffs.len() - 1);
        let mut acc = 0.0;
        for &c in &coeffs {
            acc = acc * z + c;
            q.push(acc);
        }
        let rem = q.pop().unwrap_or(0.0);
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(p, c)| c.abs() * z.abs().powi(p as i32))
            .sum::<f64>()
            + 1.0;
        if rem.abs() > 1e-8 * scale {
            return Err(SolitonError::SatoProperty(format!(
                "kappa_{i} is not a root of the Darboux polynomial"
            )));
        }
        coeffs = q;
        stripped.push(z);
    }
    let poly = RealPoly::new(coeffs);
    let want = poly.degree();
    let slack = 1e-9 * (1.0 + hi - lo);
    let mut roots = real_roots(&poly, [lo - slack, hi + slack]);
    if roots.len() != want {
        let all = real_roots(&poly, [-1e12, 1e12]);
        return Err(SolitonError::SatoProperty(format!(
            "{} of {want} roots in [{lo}, {hi}] (real roots found: {all:?})",
            roots.len()
        )));
    }
    for r in roots.iter_mut() {
        *r = r.clamp(lo, hi);
    }
    Ok(SatoDivisor {
        t0: t0.clone(),
        roots,
        stripped,
        darboux: ds,
    })
}

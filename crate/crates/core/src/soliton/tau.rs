use serde::Serialize;

use super::real::eliminate;
use super::{Real, ScaledValue, SolitonData, SolitonError, Times};

/// det of the k×k Wronskian of f^(1..k) in x.
pub fn tau_wronskian<R: Real>(sd: &SolitonData, t: &Times) -> ScaledValue {
    let k = sd.k();
    let st = stable_rows::<R>(sd, t);
    let mut w: Vec<Vec<R>> = derivative_table(sd, &st.rows, k - 1);
    let (det, _) = eliminate(&mut w, None);
    ScaledValue {
        mantissa: st.sign * det.to_f64(),
        log_scale: st.log_scale.to_f64(),
    }
}

/// Σ_I Δ_I · V(κ_I) · e^{Σ_{i∈I} θ_i}.
pub fn tau_minorsum<R: Real>(sd: &SolitonData, t: &Times) -> ScaledValue {
    let (phases, shift) = term_phases::<R>(sd, t);
    let sum = sd
        .tau_terms()
        .iter()
        .zip(&phases)
        .fold(R::zero(), |acc, (term, &p)| acc + R::from_f64(term.coeff()) * (p - shift).exp());
    ScaledValue {
        mantissa: sum.to_f64(),
        log_scale: shift.to_f64(),
    }
}

fn term_phases<R: Real>(sd: &SolitonData, t: &Times) -> (Vec<R>, R) {
    phases_from_thetas(sd, &sd.thetas(t))
}

fn phases_from_thetas<R: Real>(sd: &SolitonData, th: &[R]) -> (Vec<R>, R) {
    let phases: Vec<R> = sd
        .tau_terms()
        .iter()
        .map(|term| term.subset.iter().fold(R::zero(), |acc, &i| acc + th[i - 1]))
        .collect();
    let shift = phases
        .iter()
        .copied()
        .fold(None, |m: Option<R>, p| Some(m.map_or(p, |m| if p > m { p } else { m })));
    (phases, shift.unwrap_or(R::zero()))
}

/// x-derivatives of log τ up to order six: the cumulants of Σ_{i∈I} κ_i
/// under the weights Δ_I V(κ_I) e^{Θ_I}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogTauDerivatives {
    pub d: [f64; 7],
}

impl LogTauDerivatives {
    /// u and its x-derivatives u, u_x, …, u_xxxx.
    pub fn u(&self, order: usize) -> f64 {
        2.0 * self.d[order + 2]
    }
}

pub fn log_tau_derivatives<R: Real>(sd: &SolitonData, t: &Times) -> Result<LogTauDerivatives, SolitonError> {
    let (d, log_z) = cumulants(sd, &sd.thetas::<R>(t), t)?;
    let mut out = d.map(|v| v.to_f64());
    out[0] = log_z.to_f64();
    Ok(LogTauDerivatives { d: out })
}

/// Cumulants d[1..=6] in working precision, and log τ up to a constant.
fn cumulants<R: Real>(sd: &SolitonData, th: &[R], t: &Times) -> Result<([R; 7], R), SolitonError> {
    let (phases, shift) = phases_from_thetas(sd, th);
    let mut z = R::zero();
    let mut weights = Vec::with_capacity(phases.len());
    let mut ks = Vec::with_capacity(phases.len());
    for (term, &p) in sd.tau_terms().iter().zip(&phases) {
        let w = R::from_f64(term.coeff()) * (p - shift).exp();
        z = z + w;
        weights.push(w);
        ks.push(term.subset.iter().fold(R::zero(), |acc, &i| acc + R::from_f64(sd.kappa()[i - 1])));
    }
    if !(z.to_f64() > 0.0) {
        return Err(SolitonError::Regularity { t: t.clone() });
    }
    let mean = weights.iter().zip(&ks).fold(R::zero(), |acc, (&w, &k)| acc + w * k) / z;
    let mut m = [R::zero(); 7];
    for (&w, &k) in weights.iter().zip(&ks) {
        let dev = k - mean;
        let mut p = w;
        for slot in m.iter_mut().skip(1) {
            p = p * dev;
            *slot = *slot + p;
        }
    }
    let m: Vec<R> = m.iter().map(|&x| x / z).collect();
    let c = |x: f64| R::from_f64(x);
    let (m2, m3, m4, m5, m6) = (m[2], m[3], m[4], m[5], m[6]);
    let d = [
        R::zero(),
        mean,
        m2,
        m3,
        m4 - c(3.0) * m2 * m2,
        m5 - c(10.0) * m3 * m2,
        m6 - c(15.0) * m4 * m2 - c(10.0) * m3 * m3 + c(30.0) * m2 * m2 * m2,
    ];
    Ok((d, z.ln() + shift))
}

/// u = 2 ∂²_x log τ.
pub fn u_field<R: Real>(sd: &SolitonData, t: &Times) -> Result<f64, SolitonError> {
    Ok(log_tau_derivatives::<R>(sd, t)?.u(0))
}

/// Step for the central differences in y and t.
pub const FD_STEP: f64 = 1e-4;

/// (−4u_t + 6uu_x + u_xxx)_x + 3u_yy with analytic x-derivatives and
/// sixth-order central differences of step h in y and t. Fourth order is
/// not enough: with κ³ spreads near 100 its h⁴ term alone reaches 1e-5.
///
/// Stencil points shift the base phases by κ^l·δ rather than rounding
/// t + δ first; otherwise the rounding of the shifted time, divided by h²,
/// dominates the residual for widely spread phases.
pub fn kp_residual<R: Real>(sd: &SolitonData, t: &Times) -> Result<f64, SolitonError> {
    let h = FD_STEP;
    let th: Vec<R> = sd.thetas(t);
    let kappa: Vec<R> = sd.kappa().iter().map(|&k| R::from_f64(k)).collect();
    let at = |l: u32, d: f64| {
        let shifted: Vec<R> = th.iter().zip(&kappa).map(|(&a, &k)| a + k.powi(l) * R::from_f64(d)).collect();
        cumulants(sd, &shifted, t)
    };
    let two = R::from_f64(2.0);
    let c = |x: f64| R::from_f64(x);
    let (here, _) = cumulants(sd, &th, t)?;
    let (u, ux, uxx, uxxxx) = (two * here[2], two * here[3], two * here[4], two * here[6]);
    let ux_at = |dt: f64| at(3, dt).map(|(d, _)| two * d[3]);
    let uy = |dy: f64| at(2, dy).map(|(d, _)| two * d[2]);
    let (a1, a2, a3) = (
        ux_at(h)? - ux_at(-h)?,
        ux_at(2.0 * h)? - ux_at(-2.0 * h)?,
        ux_at(3.0 * h)? - ux_at(-3.0 * h)?,
    );
    let ux_t = (c(45.0) * a1 - c(9.0) * a2 + a3) / c(60.0 * h);
    let (b1, b2, b3) = (uy(h)? + uy(-h)?, uy(2.0 * h)? + uy(-2.0 * h)?, uy(3.0 * h)? + uy(-3.0 * h)?);
    let uyy = (c(270.0) * b1 - c(27.0) * b2 + c(2.0) * b3 - c(490.0) * u) / c(180.0 * h * h);
    let r = c(-4.0) * ux_t + c(6.0) * (ux * ux + u * uxx) + uxxxx + c(3.0) * uyy;
    Ok(r.to_f64())
}

/// Rows of A·diag(e^{θ_j}) after Gaussian elimination with complete pivoting,
/// each rescaled to unit max-norm. The elimination has determinant ±1, so
/// Wronskians of the new rows equal the original ones up to `sign` and
/// `e^{log_scale}`. Rows then have distinct dominant exponentials, which
/// keeps the Wronskian and the Darboux system well conditioned.
pub(crate) struct StableRows<R> {
    pub rows: Vec<Vec<R>>,
    pub log_scale: R,
    pub sign: f64,
}

pub(crate) fn stable_rows<R: Real>(sd: &SolitonData, t: &Times) -> StableRows<R> {
    let th: Vec<R> = sd.thetas(t);
    let n = sd.n();
    let mut log_scale = R::zero();
    let mut rows: Vec<Vec<R>> = sd
        .rows()
        .iter()
        .map(|f| {
            let m = f.max_phase(&th).unwrap_or(R::zero());
            log_scale = log_scale + m;
            (0..n)
                .map(|j| match f.coeffs[j] {
                    0.0 => R::zero(),
                    c => R::from_f64(c) * (th[j] - m).exp(),
                })
                .collect()
        })
        .collect();
    let k = rows.len();
    let mut sign = 1.0;
    let mut used = vec![false; n];
    for step in 0..k {
        let mut best: Option<(usize, usize, f64)> = None;
        for (r, row) in rows.iter().enumerate().skip(step) {
            for (j, v) in row.iter().enumerate() {
                let a = v.abs().to_f64();
                if !used[j] && best.is_none_or(|b| a > b.2) {
                    best = Some((r, j, a));
                }
            }
        }
        let Some((r, j, a)) = best else { break };
        if a == 0.0 {
            break;
        }
        if r != step {
            rows.swap(r, step);
            sign = -sign;
        }
        used[j] = true;
        let piv = rows[step][j];
        for other in step + 1..k {
            let f = rows[other][j] / piv;
            if f.abs().to_f64() == 0.0 {
                continue;
            }
            for c in 0..n {
                let v = rows[step][c];
                rows[other][c] = rows[other][c] - f * v;
            }
            rows[other][j] = R::zero();
        }
    }
    for row in rows.iter_mut() {
        let m = row.iter().fold(R::zero(), |m, v| if v.abs() > m { v.abs() } else { m });
        if m.to_f64() > 0.0 {
            log_scale = log_scale + m.ln();
            for v in row.iter_mut() {
                *v = *v / m;
            }
        }
    }
    StableRows { rows, log_scale, sign }
}

/// ∂_x^p of each stabilized row, p = 0..=order.
pub(crate) fn derivative_table<R: Real>(sd: &SolitonData, rows: &[Vec<R>], order: usize) -> Vec<Vec<R>> {
    let kap: Vec<R> = sd.kappa().iter().map(|&x| R::from_f64(x)).collect();
    rows.iter()
        .map(|row| {
            (0..=order)
                .map(|p| {
                    row.iter()
                        .zip(&kap)
                        .filter(|(v, _)| v.to_f64() != 0.0)
                        .fold(R::zero(), |acc, (&v, &k)| acc + v * k.powi(p as u32))
                })
                .collect()
        })
        .collect()
}

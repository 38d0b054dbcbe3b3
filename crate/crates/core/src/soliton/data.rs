use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use super::{Real, SolitonError};
use crate::algebra::rational_to_f64;
use crate::le::{boundary_measurement, build_network, reduce_soliton_data, GrassmannPoint, LeTableau, SolitonReduction};

/// Finite-support time vector: index l ↦ t_l, with t_1 = x, t_2 = y, t_3 = t.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Times(BTreeMap<usize, f64>);

impl Times {
    pub fn xyt(x: f64, y: f64, t: f64) -> Self {
        Self::from_pairs([(1, x), (2, y), (3, t)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        Self(pairs.into_iter().filter(|&(l, v)| l >= 1 && v != 0.0).collect())
    }

    pub fn get(&self, l: usize) -> f64 {
        self.0.get(&l).copied().unwrap_or(0.0)
    }

    pub fn with(&self, l: usize, v: f64) -> Self {
        let mut out = self.clone();
        if v == 0.0 {
            out.0.remove(&l);
        } else {
            out.0.insert(l, v);
        }
        out
    }

    /// Shifts t_l by dv.
    pub fn bump(&self, l: usize, dv: f64) -> Self {
        self.with(l, self.get(l) + dv)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().map(|(&l, &v)| (l, v))
    }

    pub fn x(&self) -> f64 {
        self.get(1)
    }
}

/// θ(κ, t) = Σ_l κ^l t_l.
pub fn theta(kappa: f64, t: &Times) -> f64 {
    theta_r(f64::from_f64(kappa), t)
}

pub(crate) fn theta_r<R: Real>(kappa: R, t: &Times) -> R {
    t.iter().fold(R::zero(), |acc, (l, v)| acc + kappa.powi(l as u32) * R::from_f64(v))
}

/// f(t) = Σ_j c_j e^{θ_j(t)}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSum {
    pub coeffs: Vec<f64>,
}

impl ExpSum {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// ∂_x: c_j ↦ κ_j c_j.
    pub fn dx(&self, kappa: &[f64]) -> ExpSum {
        ExpSum::new(self.coeffs.iter().zip(kappa).map(|(c, k)| c * k).collect())
    }

    pub fn eval(&self, kappa: &[f64], t: &Times) -> f64 {
        self.coeffs
            .iter()
            .zip(kappa)
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, &k)| c * theta(k, t).exp())
            .sum()
    }

    /// Largest phase among the non-zero terms.
    pub(crate) fn max_phase<R: Real>(&self, thetas: &[R]) -> Option<R> {
        self.coeffs
            .iter()
            .zip(thetas)
            .filter(|(c, _)| **c != 0.0)
            .map(|(_, &th)| th)
            .fold(None, |m: Option<R>, th| Some(m.map_or(th, |m| if th > m { th } else { m })))
    }
}

/// One exponential of the minor-sum: Δ_I · Π_{a<b}(κ_{i_b} − κ_{i_a}) e^{Σ_{i∈I} θ_i}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauTerm {
    pub subset: Vec<usize>,
    pub minor: f64,
    pub vandermonde: f64,
}

impl TauTerm {
    pub fn coeff(&self) -> f64 {
        self.minor * self.vandermonde
    }
}

/// Soliton data: ordered phases plus a TNN point.
#[derive(Clone, Debug)]
pub struct SolitonData {
    kappa: Vec<f64>,
    point: GrassmannPoint,
    rows: Vec<ExpSum>,
    terms: Vec<TauTerm>,
    pivot_only: Vec<(usize, usize)>,
    zero_columns: Vec<usize>,
}

impl SolitonData {
    pub fn new(kappa: Vec<f64>, point: GrassmannPoint) -> Result<Self, SolitonError> {
        if kappa.len() != point.n() {
            return Err(SolitonError::Phases(format!("{} phases for n = {}", kappa.len(), point.n())));
        }
        if kappa.iter().any(|k| !k.is_finite()) || !kappa.windows(2).all(|w| w[0] < w[1]) {
            return Err(SolitonError::Phases(format!("phases {kappa:?} are not strictly increasing")));
        }
        if !point.is_totally_nonnegative() {
            return Err(SolitonError::NotTotallyNonnegative);
        }
        let (k, n) = (point.k(), point.n());
        let m = point.matrix();
        let rows: Vec<ExpSum> = (0..k)
            .map(|r| ExpSum::new((0..n).map(|c| rational_to_f64(m.get(r, c))).collect()))
            .collect();
        let terms = point
            .plucker()
            .into_iter()
            .filter(|(_, d)| !d.is_zero())
            .map(|(subset, d)| {
                let vandermonde = subset
                    .iter()
                    .tuple_combinations()
                    .map(|(&a, &b)| kappa[b - 1] - kappa[a - 1])
                    .product();
                TauTerm {
                    subset,
                    minor: rational_to_f64(&d),
                    vandermonde,
                }
            })
            .collect();
        let pivot_only = (1..=k)
            .filter(|&r| {
                let i = point.pivots()[r - 1];
                (1..=n).all(|j| j == i || m.get(r - 1, j - 1).is_zero())
            })
            .map(|r| (r, point.pivots()[r - 1]))
            .collect();
        let zero_columns = (1..=n).filter(|&j| (0..k).all(|r| m.get(r, j - 1).is_zero())).collect();
        Ok(Self {
            kappa,
            point,
            rows,
            terms,
            pivot_only,
            zero_columns,
        })
    }

    pub fn from_tableau(kappa: Vec<f64>, tab: &LeTableau) -> Result<Self, SolitonError> {
        Self::new(kappa, boundary_measurement(&build_network(tab)))
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn point(&self) -> &GrassmannPoint {
        &self.point
    }

    pub fn k(&self) -> usize {
        self.point.k()
    }

    pub fn n(&self) -> usize {
        self.point.n()
    }

    /// Heat-hierarchy generators f^(r), one per RREF row.
    pub fn rows(&self) -> &[ExpSum] {
        &self.rows
    }

    pub fn tau_terms(&self) -> &[TauTerm] {
        &self.terms
    }

    /// (row, pivot) of rows holding only their pivot.
    pub fn pivot_only_rows(&self) -> &[(usize, usize)] {
        &self.pivot_only
    }

    pub fn zero_columns(&self) -> &[usize] {
        &self.zero_columns
    }

    pub fn is_reducible(&self) -> bool {
        !self.pivot_only.is_empty() || !self.zero_columns.is_empty()
    }

    /// Maximally reduced data with the surviving phases.
    pub fn reduced(&self) -> Result<(SolitonData, SolitonReduction), SolitonError> {
        let red = reduce_soliton_data(&self.point).map_err(|e| SolitonError::Phases(e.to_string()))?;
        let kappa = red.kept_columns(self.n()).iter().map(|&j| self.kappa[j - 1]).collect();
        Ok((SolitonData::new(kappa, red.point.clone())?, red))
    }

    pub(crate) fn thetas<R: Real>(&self, t: &Times) -> Vec<R> {
        self.kappa.iter().map(|&k| theta_r(R::from_f64(k), t)).collect()
    }
}

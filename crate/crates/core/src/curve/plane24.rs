//! Explicit plane curves for the Gr(2,4) top cell: the five-line model, its
//! perturbation, and the rational one-parameter family in ξ.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use super::CurveError;

/// Dense-enough bivariate polynomial in (λ, μ), keyed by exponents.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), f64>,
}

impl BiPoly {
    pub fn constant(c: f64) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), f64)>) -> Self {
        let mut p = Self::default();
        for (e, c) in terms {
            *p.terms.entry(e).or_insert(0.0) += c;
        }
        p.terms.retain(|_, c| *c != 0.0);
        p
    }

    /// a·λ + b·μ + c
    pub fn linear(a: f64, b: f64, c: f64) -> Self {
        Self::from_terms([((1, 0), a), ((0, 1), b), ((0, 0), c)])
    }

    pub fn eval(&self, l: f64, m: f64) -> f64 {
        self.terms.iter().map(|(&(i, j), c)| c * l.powi(i as i32) * m.powi(j as i32)).sum()
    }

    pub fn coeff(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&e, &c)| (e, c * s)))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms(self.terms().chain(rhs.terms()))
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms(self.terms().chain(rhs.terms().map(|(e, c)| (e, -c))))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        BiPoly::from_terms(
            self.terms()
                .flat_map(|((a, b), c)| rhs.terms().map(move |((d, e), f)| ((a + d, b + e), c * f))),
        )
    }
}

fn product(factors: &[BiPoly]) -> BiPoly {
    factors.iter().fold(BiPoly::constant(1.0), |acc, f| &acc * f)
}

/// Number of singular points of a union of n1 lines, n2 quadrics and n3
/// nodal cubics in general position, before normalization.
pub fn singularity_count(n1: u64, n2: u64, n3: u64) -> u64 {
    n1 * n1.saturating_sub(1) / 2
        + 2 * n1 * n2
        + 3 * n1 * n3
        + 2 * n2 * n2.saturating_sub(1)
        + 6 * n2 * n3
        + 9 * n3 * n3.saturating_sub(1) / 2
        + n3
}

/// The five-line model of the reduced Gr(2,4) curve for phases κ1<κ2<κ3<κ4.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneCurve24 {
    pub kappa: [f64; 4],
    pub c13: f64,
}

impl PlaneCurve24 {
    pub fn new(kappa: [f64; 4]) -> Result<Self, CurveError> {
        if !kappa.windows(2).all(|w| w[0] < w[1]) {
            return Err(CurveError::Degenerate(format!("phases {kappa:?} are not increasing")));
        }
        let [k1, k2, k3, k4] = kappa;
        let s = k2 + k4 - 2.0 * k3;
        if s == 0.0 {
            return Err(CurveError::Degenerate("kappa_2 + kappa_4 = 2 kappa_3".into()));
        }
        let c13 = (s * (k4 - k3) * (k2 - k1) + (k3 - k1) * (k3 - k2).powi(2)) / ((k4 - k1) * (k2 - k1) * s);
        Ok(Self { kappa, c13 })
    }

    /// Γ0, Γ13, Γ23, Σ23, Σ24 in that order.
    pub fn lines(&self) -> [BiPoly; 5] {
        let [k1, k2, k3, k4] = self.kappa;
        [
            BiPoly::linear(0.0, 1.0, 0.0),
            BiPoly::linear(-self.c13, 1.0, self.c13 * k1),
            BiPoly::linear(-1.0, 1.0, k3),
            BiPoly::linear(1.0, 0.0, -k2),
            BiPoly::linear(1.0, 0.0, -k4),
        ]
    }

    pub fn pi0(&self) -> BiPoly {
        product(&self.lines())
    }

    /// Finite intersection of Γ13 and Γ23 (None when they are parallel).
    pub fn alpha5(&self) -> Option<(f64, f64)> {
        let [k1, _, k3, _] = self.kappa;
        let c = self.c13;
        if c == 1.0 {
            return None;
        }
        Some((-(k3 - c * k1) / (c - 1.0), -c * (k3 - k1) / (c - 1.0)))
    }

    /// Root of the resultant in μ of the Γ13 and Γ23 equations, i.e. the λ
    /// coordinate of their intersection found by elimination.
    pub fn alpha5_by_resultant(&self) -> Option<f64> {
        let lines = self.lines();
        let (p, q) = (&lines[1], &lines[2]);
        // Res_μ(a1 λ + b1 μ + c1, a2 λ + b2 μ + c2) = (a1 b2 − a2 b1) λ + (c1 b2 − c2 b1)
        let lead = p.coeff(1, 0) * q.coeff(0, 1) - q.coeff(1, 0) * p.coeff(0, 1);
        let tail = p.coeff(0, 0) * q.coeff(0, 1) - q.coeff(0, 0) * p.coeff(0, 1);
        (lead != 0.0).then(|| -tail / lead)
    }

    /// Marked real points α1..α4 where the vertical lines meet Γ23 and Γ13.
    pub fn alphas(&self) -> [(f64, f64); 4] {
        let [k1, k2, k3, k4] = self.kappa;
        [(k2, k2 - k3), (k2, self.c13 * (k2 - k1)), (k4, self.c13 * (k4 - k1)), (k4, k4 - k3)]
    }

    /// Π0 + ε²(λ−λ5)²C0, or Π0 + ε²C0 when Γ13 ∥ Γ23.
    pub fn perturbed(&self, eps: f64, c0: &BiPoly) -> BiPoly {
        let bump = match self.alpha5() {
            Some((l5, _)) => {
                let f = BiPoly::linear(1.0, 0.0, -l5);
                &(&f * &f) * c0
            }
            None => c0.clone(),
        };
        &self.pi0() + &bump.scale(eps * eps)
    }

    /// Sign conditions on C0 that open the right gaps, for the
    /// κ2+κ4−2κ3 < 0 branch: C0(κ1) and C0(α2) share a sign opposite to
    /// C0 at κ2, κ3, κ4, α1, α3, α4.
    pub fn c0_admissible(&self, c0: &BiPoly) -> Result<bool, CurveError> {
        let [k1, k2, k3, k4] = self.kappa;
        if k2 + k4 - 2.0 * k3 >= 0.0 {
            return Err(CurveError::Degenerate(
                "C0 sign conditions are implemented for kappa_2 + kappa_4 < 2 kappa_3 only".into(),
            ));
        }
        let a = self.alphas();
        let s = c0.eval(k1, 0.0).signum();
        let same = [a[1]];
        let opposite = [(k2, 0.0), (k3, 0.0), (k4, 0.0), a[0], a[2], a[3]];
        Ok(s != 0.0
            && same.iter().all(|&(l, m)| c0.eval(l, m).signum() == s)
            && opposite.iter().all(|&(l, m)| c0.eval(l, m).signum() == -s))
    }
}

/// The rational family Γ(ξ), ξ > 1, degenerating to the five-line model.
#[derive(Clone, Debug, Serialize)]
pub struct XiFamily {
    pub kappa: [f64; 4],
    pub xi: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda5: f64,
    pub c13: f64,
    pub c23: f64,
}

impl XiFamily {
    pub fn new(kappa: [f64; 4], xi: f64) -> Result<Self, CurveError> {
        PlaneCurve24::new(kappa)?;
        if xi.is_nan() || xi <= 1.0 {
            return Err(CurveError::Degenerate(format!("xi = {xi} must exceed 1")));
        }
        let [k1, k2, k3, k4] = kappa;
        let l2 = (xi * xi * k2 * (k4 - k3) + (1.0 - xi) * k3 * (k4 - k2)) / (xi * xi * (k4 - k3) + (1.0 - xi) * (k4 - k2));
        let l3 = (xi * k4 * (k3 - k2) - k3 * (k4 - k2)) / (xi * (k3 - k2) - k4 + k2);
        let s = k1 + k2 + k3 + k4;
        let s2 = k2 * k3 + k2 * k4 + k3 * k4;
        let c13 = (l2 * l3 * (l2 + l3 - s) + k1 * (l2 + l3) * (k2 + k3 + k4) - k1 * (l2 * l2 + l3 * l3 + s2) + k2 * k3 * k4)
            / ((l2 - k1) * (l3 - k1) * (l2 + l3 - k2 - k4));
        let c23 = -c13 * (l2 - k1) / (xi * (l2 - k4) * (l2 - k2) * (c13 * (l2 - k1) - l2 + k3));
        let p = k1 * k2 + k1 * k4 - k2 * k4;
        let l5 = (l2 * l3 * k1 - (l2 + l3) * p - k2 * k2 * (k4 - k1) - k4 * k4 * (k2 - k1) + k1 * k2 * k4) / (l2 * l3 - k1 * (l2 + l3) + p);
        let out = Self {
            kappa,
            xi,
            lambda2: l2,
            lambda3: l3,
            lambda5: l5,
            c13,
            c23,
        };
        if ![l2, l3, l5, c13, c23].iter().all(|v| v.is_finite()) {
            return Err(CurveError::Degenerate(format!("xi family undefined at xi = {xi}")));
        }
        Ok(out)
    }

    /// Limit of c23(ξ) as ξ → ∞.
    pub fn c23_limit(kappa: [f64; 4]) -> Result<f64, CurveError> {
        let c13 = PlaneCurve24::new(kappa)?.c13;
        let [k1, k2, k3, k4] = kappa;
        Ok(-c13 * (k4 - k1) * (k2 - k1) * (k2 + k4 - 2.0 * k3) / ((k3 - k1) * (k3 - k2) * (k4 - k3) * (k4 - k2).powi(2)))
    }

    /// Γ2(ξ): μ − c13(ξ)(λ−κ1).
    pub fn gamma2(&self) -> BiPoly {
        BiPoly::linear(-self.c13, 1.0, self.c13 * self.kappa[0])
    }

    /// Γ1(ξ): μ/ξ − c23(ξ)(λ−κ2)(λ−κ3−μ)(λ−κ4).
    pub fn gamma1(&self) -> BiPoly {
        let [_, k2, k3, k4] = self.kappa;
        let cubic = product(&[
            BiPoly::linear(1.0, 0.0, -k2),
            BiPoly::linear(1.0, -1.0, -k3),
            BiPoly::linear(1.0, 0.0, -k4),
        ]);
        &BiPoly::linear(0.0, 1.0 / self.xi, 0.0) - &cubic.scale(self.c23)
    }

    pub fn pi(&self) -> BiPoly {
        product(&[BiPoly::linear(0.0, 1.0, 0.0), self.gamma2(), self.gamma1()])
    }

    /// Π_ξ + ε²(λ−λ5,ξ)²C0.
    pub fn perturbed(&self, eps: f64, c0: &BiPoly) -> BiPoly {
        let f = BiPoly::linear(1.0, 0.0, -self.lambda5);
        &self.pi() + &(&(&f * &f) * c0).scale(eps * eps)
    }

    /// Points where Γ2(ξ) meets the cubic Γ1(ξ).
    pub fn line_cubic_intersections(&self) -> [(f64, f64); 3] {
        let at = |l: f64| (l, self.c13 * (l - self.kappa[0]));
        [at(self.lambda2), at(self.lambda3), at(self.lambda5)]
    }
}

#[cfg(test)]
impl BiPoly {
    fn add_const(&self, c: f64) -> Self {
        self + &BiPoly::constant(c)
    }
}

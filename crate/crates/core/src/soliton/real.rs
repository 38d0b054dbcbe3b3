use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::Serialize;
use twofloat::TwoFloat;

use super::SolitonError;

/// Scalar used by the exponential-sum kernels.
pub trait Real:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn abs(self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn powi(self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self)
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl Real for TwoFloat {
    fn from_f64(x: f64) -> Self {
        TwoFloat::from(x)
    }
    fn to_f64(self) -> f64 {
        self.hi() + self.lo()
    }
    fn exp(self) -> Self {
        exp_dd(self)
    }
    fn ln(self) -> Self {
        ln_dd(self)
    }
    fn abs(self) -> Self {
        TwoFloat::abs(&self)
    }
}

// twofloat's own exp/ln lose several digits (1e-12 relative near e^-100), so
// double-double versions are done here: reduction by ln 2, a Taylor series on
// r/2^10, then ten squarings.
const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

fn exp_dd(x: TwoFloat) -> TwoFloat {
    let hi = x.hi();
    if hi > 709.7 {
        return TwoFloat::from(f64::INFINITY);
    }
    if hi < -745.0 {
        return TwoFloat::from(0.0);
    }
    let k = (hi / LN2_HI).round();
    let ln2 = TwoFloat::new_add(LN2_HI, LN2_LO);
    let r = x - ln2 * k;
    let s = r * (1.0 / 1024.0);
    let mut sum = TwoFloat::from(1.0);
    let mut term = TwoFloat::from(1.0);
    for i in 1..=14 {
        term = term * s / (i as f64);
        sum += term;
    }
    for _ in 0..10 {
        sum = sum * sum;
    }
    // 2^k in two steps keeps each factor representable
    let k = k as i32;
    let (a, b) = (k / 2, k - k / 2);
    sum * 2f64.powi(a) * 2f64.powi(b)
}

fn ln_dd(x: TwoFloat) -> TwoFloat {
    let y0 = TwoFloat::from(x.hi().ln());
    if !x.hi().is_finite() || x.hi() <= 0.0 {
        return y0;
    }
    y0 + x * exp_dd(-y0) - 1.0
}

/// Working precision, chosen from a bit count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Precision {
    #[default]
    Double,
    DoubleDouble,
}

impl Precision {
    pub fn from_bits(bits: u32) -> Result<Self, SolitonError> {
        match bits {
            1..=53 => Ok(Precision::Double),
            54..=106 => Ok(Precision::DoubleDouble),
            _ => Err(SolitonError::Precision(bits)),
        }
    }

    pub fn bits(self) -> u32 {
        match self {
            Precision::Double => 53,
            Precision::DoubleDouble => 106,
        }
    }
}

/// mantissa · e^{log_scale}; keeps τ representable far from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScaledValue {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    /// Natural log of a positive value.
    pub fn ln(self) -> f64 {
        self.mantissa.ln() + self.log_scale
    }

    /// self / other as a plain number.
    pub fn ratio(self, other: ScaledValue) -> f64 {
        self.mantissa / other.mantissa * (self.log_scale - other.log_scale).exp()
    }
}

/// Gaussian elimination with partial pivoting. Returns the determinant and
/// leaves `a` upper triangular; `b` (if any) receives the same row operations.
pub(crate) fn eliminate<R: Real>(a: &mut [Vec<R>], mut b: Option<&mut [R]>) -> (R, f64) {
    let n = a.len();
    let mut det = R::one();
    let mut min_ratio = f64::INFINITY;
    let scale: Vec<f64> = a
        .iter()
        .map(|row| row.iter().fold(0.0f64, |m, x| m.max(x.abs().to_f64())))
        .collect();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        if p != col {
            a.swap(p, col);
            perm.swap(p, col);
            if let Some(b) = b.as_deref_mut() {
                b.swap(p, col);
            }
            det = -det;
        }
        let piv = a[col][col];
        let s = scale[perm[col]];
        if s > 0.0 {
            min_ratio = min_ratio.min(piv.abs().to_f64() / s);
        } else {
            min_ratio = 0.0;
        }
        det = det * piv;
        if piv.abs().to_f64() == 0.0 {
            return (R::zero(), 0.0);
        }
        for r in col + 1..n {
            let f = a[r][col] / piv;
            if f.abs().to_f64() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[col][c];
                a[r][c] = a[r][c] - f * v;
            }
            if let Some(b) = b.as_deref_mut() {
                let v = b[col];
                b[r] = b[r] - f * v;
            }
        }
    }
    (det, min_ratio)
}

pub(crate) fn back_substitute<R: Real>(a: &[Vec<R>], b: &[R]) -> Vec<R> {
    let n = a.len();
    let mut x = vec![R::zero(); n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s = s - a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_bits() {
        assert_eq!(Precision::from_bits(53).unwrap(), Precision::Double);
        assert_eq!(Precision::from_bits(64).unwrap(), Precision::DoubleDouble);
        assert_eq!(Precision::from_bits(106).unwrap(), Precision::DoubleDouble);
        assert!(Precision::from_bits(107).is_err());
        assert!(Precision::from_bits(0).is_err());
    }

    #[test]
    fn twofloat_carries_extra_digits() {
        let a = TwoFloat::from_f64(1.0) + TwoFloat::from_f64(1e-20);
        assert!((a - TwoFloat::from_f64(1.0)).to_f64() > 0.0);
        assert!((Real::exp(TwoFloat::from_f64(1.0)).to_f64() - std::f64::consts::E).abs() < 1e-15);
        // e^{x} e^{-x} = 1 and ln(e^x) = x to double-double accuracy
        for x in [-300.0, -40.5, -1.0e-3, 0.3, 7.25, 100.0, 650.0] {
            let t = TwoFloat::from_f64(x);
            let p = Real::exp(t) * Real::exp(-t) - TwoFloat::from(1.0);
            assert!(p.abs().to_f64() < 1e-28, "{x}: {p:?}");
            let back = Real::ln(Real::exp(t)) - t;
            assert!(back.abs().to_f64() < 1e-28 * x.abs().max(1.0), "{x}: {back:?}");
        }
    }

    #[test]
    fn solve_small_system() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let mut b = vec![3.0, 5.0];
        let (det, _) = eliminate(&mut a, Some(&mut b));
        assert!((det - 5.0).abs() < 1e-14);
        let x = back_substitute(&a, &b);
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }
}

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{rational_to_f64, Rational};

/// Real polynomial with floating coefficients, highest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    /// Leading zeros are stripped; an all-zero list is the zero polynomial.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        let lead = coeffs.iter().position(|c| *c != 0.0).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        Self { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[f64]) -> Self {
        let mut c = vec![1.0];
        for &r in roots {
            let mut next = vec![0.0; c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i] += a;
                next[i + 1] -= a * r;
            }
            c = next;
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> RealPoly {
        let d = self.degree();
        RealPoly::new(self.coeffs.iter().take(d).enumerate().map(|(i, &c)| c * (d - i) as f64).collect())
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    fn to_exact(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .rev()
                .map(|&c| BigRational::from_float(c).expect("finite coefficient"))
                .collect(),
        )
    }
}

/// Exact polynomial over Q, lowest degree first. Used for Sturm sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c.iter().rev().fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    fn scale(&self, s: &Rational) -> QPoly {
        QPoly::new(self.c.iter().map(|a| a * s).collect())
    }

    fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    fn sub(&self, other: &QPoly) -> QPoly {
        let n = self.c.len().max(other.c.len());
        let z = Rational::zero();
        QPoly::new((0..n).map(|i| self.c.get(i).unwrap_or(&z) - other.c.get(i).unwrap_or(&z)).collect())
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dl = d.lead();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (QPoly::new(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] / &dl;
            if !f.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] -= &f * b;
                }
            }
            q[i] = f;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's algorithm: returns (a_1, a_2, ...) with p = c·Π a_i^i, each a_i
    /// square-free and monic.
    pub fn square_free_factors(&self) -> Vec<QPoly> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let dp = self.derivative();
        let a0 = self.gcd(&dp);
        let mut b = self.div_rem(&a0).0;
        let mut c = dp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            out.push(a);
        }
        out
    }

    fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            // scale to keep the coefficients small; only the sign matters
            let s = -r.lead().abs().recip();
            seq.push(r.scale(&s));
        }
        seq
    }
}

fn sign_changes(seq: &[QPoly], x: &Rational) -> usize {
    let mut prev = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    /// Relative accuracy: |r − r*| ≤ tol·max(1, |r*|).
    pub tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { tol: 1e-12 }
    }
}

/// All real roots of `p` in the closed interval `[lo, hi]`, repeated by
/// multiplicity and sorted.
pub fn real_roots(p: &RealPoly, interval: [f64; 2]) -> Vec<f64> {
    real_roots_with(p, interval, RootOptions::default())
}

pub fn real_roots_with(p: &RealPoly, interval: [f64; 2], opts: RootOptions) -> Vec<f64> {
    let [lo, hi] = interval;
    if p.is_zero() || !(lo <= hi) {
        return Vec::new();
    }
    let lo = BigRational::from_float(lo).expect("finite bound");
    let hi = BigRational::from_float(hi).expect("finite bound");
    let mut roots = Vec::new();
    for (i, factor) in p.to_exact().square_free_factors().iter().enumerate() {
        if factor.degree() == 0 {
            continue;
        }
        for r in isolate(factor, &lo, &hi, opts.tol) {
            roots.extend(std::iter::repeat_n(r, i + 1));
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots
}

/// Roots of a square-free polynomial in [lo, hi].
fn isolate(f: &QPoly, lo: &Rational, hi: &Rational, tol: f64) -> Vec<f64> {
    let seq = f.sturm_sequence();
    let mut out = Vec::new();
    if f.eval(lo).is_zero() {
        out.push(rational_to_f64(lo));
    }
    if lo == hi {
        return out;
    }
    // intervals are half-open (a, b]
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = Rational::from_integer(2.into());
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        match count {
            0 => {}
            1 => out.push(refine(f, a, b, tol)),
            _ => {
                let m = (&a + &b) / &two;
                stack.push((a, m.clone()));
                stack.push((m, b));
            }
        }
    }
    out
}

fn refine(f: &QPoly, mut a: Rational, mut b: Rational, tol: f64) -> f64 {
    if f.eval(&b).is_zero() {
        return rational_to_f64(&b);
    }
    let two = Rational::from_integer(2.into());
    let sign_b = f.eval(&b).is_positive();
    let width_ok = |a: &Rational, b: &Rational| {
        let w = rational_to_f64(&(b - a));
        let scale = rational_to_f64(a).abs().max(rational_to_f64(b).abs()).max(1.0);
        w <= 0.25 * tol * scale
    };
    while !width_ok(&a, &b) {
        let m = (&a + &b) / &two;
        let fm = f.eval(&m);
        if fm.is_zero() {
            return rational_to_f64(&m);
        }
        if fm.is_positive() == sign_b {
            b = m;
        } else {
            a = m;
        }
        // stop once the interval is below f64 resolution
        if rational_to_f64(&a) == rational_to_f64(&b) {
            break;
        }
    }
    polish(f, rational_to_f64(&a), rational_to_f64(&b))
}

/// A couple of guarded Newton steps on the square-free factor.
fn polish(f: &QPoly, a: f64, b: f64) -> f64 {
    let coeffs: Vec<f64> = f.c.iter().rev().map(rational_to_f64).collect();
    let p = RealPoly::new(coeffs);
    let dp = p.derivative();
    let mut x = 0.5 * (a + b);
    for _ in 0..3 {
        let d = dp.eval(x);
        if d == 0.0 {
            break;
        }
        let next = x - p.eval(x) / d;
        if !(next >= a && next <= b) {
            break;
        }
        x = next;
    }
    x
}

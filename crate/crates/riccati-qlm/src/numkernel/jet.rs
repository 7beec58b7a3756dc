//! Truncated Taylor polynomials ("jets") about a fixed anchor.
//!
//! Every elementary operation is the usual recurrence on coefficients, so a
//! jet of order `M` carries exact Taylor coefficients `c_0..c_M` of the
//! composite function, up to rounding.

use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use super::complex::Scalar;
use super::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("operation needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("jets are anchored at different points ({0:?} vs {1:?})")]
    AnchorMismatch(Real, Real),
    #[error("jet orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("jet order exhausted: need {needed}, have {have}")]
    OrderExhausted { needed: usize, have: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S: Scalar = Real> {
    pub anchor: Real,
    pub coeffs: Vec<S>,
}

/// Binary and unary jet operations, see [`jet_ops`].
pub enum JetOp<'a, S: Scalar> {
    Add(&'a Jet<S>),
    Mul(&'a Jet<S>),
    Div(&'a Jet<S>),
    Sqrt,
    Exp,
    Log,
    Pow(Real),
}

/// Checked entry point for jet arithmetic.
pub fn jet_ops<S: Scalar>(a: &Jet<S>, op: JetOp<'_, S>) -> Result<Jet<S>, JetError> {
    match op {
        JetOp::Add(b) => {
            a.compatible(b)?;
            Ok(a + b)
        }
        JetOp::Mul(b) => {
            a.compatible(b)?;
            Ok(a * b)
        }
        JetOp::Div(b) => {
            a.compatible(b)?;
            a.div(b)
        }
        JetOp::Sqrt => a.sqrt(),
        JetOp::Exp => Ok(a.exp()),
        JetOp::Log => a.ln(),
        JetOp::Pow(e) => a.powf(e),
    }
}

// Coefficient kernels on plain slices, reused by the Taylor integrators.

/// `n`-th coefficient of the product `a·b`.
#[inline]
pub fn conv<S: Scalar>(a: &[S], b: &[S], n: usize) -> S {
    let mut s = S::zero();
    for i in 0..=n {
        s += a[i] * b[n - i];
    }
    s
}

pub fn mul_series<S: Scalar>(a: &[S], b: &[S], m: usize) -> Vec<S> {
    (0..=m).map(|n| conv(a, b, n)).collect()
}

pub fn div_series<S: Scalar>(a: &[S], b: &[S], m: usize) -> Vec<S> {
    let mut q: Vec<S> = Vec::with_capacity(m + 1);
    let inv = S::one() / b[0];
    for n in 0..=m {
        let mut s = a[n];
        for i in 1..=n {
            s -= b[i] * q[n - i];
        }
        q.push(s * inv);
    }
    q
}

/// `a^e` for a real exponent, `a[0]` must be nonzero.
pub fn pow_series<S: Scalar>(a: &[S], e: Real, m: usize) -> Vec<S> {
    let mut p: Vec<S> = Vec::with_capacity(m + 1);
    p.push((a[0].ln().scale(e)).exp());
    let inv = S::one() / a[0];
    for n in 1..=m {
        let mut s = S::zero();
        for k in 1..=n {
            let w = (e + 1.0) * (k as f64) - n as f64;
            s += a[k] * p[n - k].scale(w);
        }
        p.push(s * inv.scale(Real::ONE / (n as f64)));
    }
    p
}

pub fn sqrt_series<S: Scalar>(a: &[S], m: usize) -> Vec<S> {
    let mut s: Vec<S> = Vec::with_capacity(m + 1);
    let s0 = a[0].sqrt();
    s.push(s0);
    let inv = S::one() / (s0 + s0);
    for n in 1..=m {
        let mut acc = a[n];
        for i in 1..n {
            acc -= s[i] * s[n - i];
        }
        s.push(acc * inv);
    }
    s
}

pub fn exp_series<S: Scalar>(a: &[S], m: usize) -> Vec<S> {
    let mut e: Vec<S> = Vec::with_capacity(m + 1);
    e.push(a[0].exp());
    for n in 1..=m {
        let mut s = S::zero();
        for k in 1..=n {
            s += a[k].scale(Real::from_f64(k as f64)) * e[n - k];
        }
        e.push(s.scale(Real::ONE / (n as f64)));
    }
    e
}

pub fn ln_series<S: Scalar>(a: &[S], m: usize) -> Vec<S> {
    let mut l: Vec<S> = Vec::with_capacity(m + 1);
    l.push(a[0].ln());
    let inv = S::one() / a[0];
    for n in 1..=m {
        let mut s = a[n];
        for k in 1..n {
            s -= l[k].scale(Real::from_f64(k as f64) / (n as f64)) * a[n - k];
        }
        l.push(s * inv);
    }
    l
}

/// Re-expand `sum a_n x^n` about `x = h`.
pub fn shift_series<S: Scalar>(a: &[S], h: Real) -> Vec<S> {
    let mut b = a.to_vec();
    let n = b.len();
    let hs = S::from_real(h);
    // Repeated synthetic division (Horner shift).
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = b[j + 1] * hs;
            b[j] += t;
        }
    }
    b
}

/// Horner evaluation of `sum a_n h^n`.
#[inline]
pub fn eval_series<S: Scalar>(a: &[S], h: Real) -> S {
    let mut s = S::zero();
    for c in a.iter().rev() {
        s = s.scale(h) + *c;
    }
    s
}

/// Derivative of `sum a_n h^n` at `h`.
pub fn eval_series_deriv<S: Scalar>(a: &[S], h: Real) -> S {
    let mut s = S::zero();
    for (n, c) in a.iter().enumerate().skip(1).rev() {
        s = s.scale(h) + c.scale(Real::from_f64(n as f64));
    }
    s
}

impl<S: Scalar> Jet<S> {
    pub fn new(anchor: Real, coeffs: Vec<S>) -> Jet<S> {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Jet { anchor, coeffs }
    }

    pub fn constant(anchor: Real, c: S, order: usize) -> Jet<S> {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = c;
        Jet { anchor, coeffs }
    }

    /// The identity function `x` expanded about `anchor`.
    pub fn variable(anchor: Real, order: usize) -> Jet<S> {
        let mut coeffs = vec![S::zero(); order + 1];
        coeffs[0] = S::from_real(anchor);
        if order >= 1 {
            coeffs[1] = S::one();
        }
        Jet { anchor, coeffs }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn value(&self) -> S {
        self.coeffs[0]
    }

    pub fn compatible(&self, other: &Jet<S>) -> Result<(), JetError> {
        if self.anchor != other.anchor {
            return Err(JetError::AnchorMismatch(self.anchor, other.anchor));
        }
        if self.order() != other.order() {
            return Err(JetError::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> Jet<S> {
        let m = order.min(self.order());
        Jet::new(self.anchor, self.coeffs[..=m].to_vec())
    }

    pub fn scale(&self, k: Real) -> Jet<S> {
        Jet::new(self.anchor, self.coeffs.iter().map(|c| c.scale(k)).collect())
    }

    pub fn mul_scalar(&self, k: S) -> Jet<S> {
        Jet::new(self.anchor, self.coeffs.iter().map(|c| *c * k).collect())
    }

    pub fn add_scalar(&self, k: S) -> Jet<S> {
        let mut c = self.coeffs.clone();
        c[0] += k;
        Jet::new(self.anchor, c)
    }

    pub fn div(&self, b: &Jet<S>) -> Result<Jet<S>, JetError> {
        if b.coeffs[0].is_zero() {
            return Err(JetError::ZeroConstantTerm);
        }
        let m = self.order().min(b.order());
        Ok(Jet::new(self.anchor, div_series(&self.coeffs, &b.coeffs, m)))
    }

    pub fn recip(&self) -> Result<Jet<S>, JetError> {
        Jet::constant(self.anchor, S::one(), self.order()).div(self)
    }

    pub fn sqrt(&self) -> Result<Jet<S>, JetError> {
        if self.coeffs[0].is_zero() {
            return Err(JetError::ZeroConstantTerm);
        }
        Ok(Jet::new(self.anchor, sqrt_series(&self.coeffs, self.order())))
    }

    pub fn exp(&self) -> Jet<S> {
        Jet::new(self.anchor, exp_series(&self.coeffs, self.order()))
    }

    pub fn ln(&self) -> Result<Jet<S>, JetError> {
        if self.coeffs[0].is_zero() {
            return Err(JetError::ZeroConstantTerm);
        }
        Ok(Jet::new(self.anchor, ln_series(&self.coeffs, self.order())))
    }

    pub fn powf(&self, e: Real) -> Result<Jet<S>, JetError> {
        if self.coeffs[0].is_zero() {
            return Err(JetError::ZeroConstantTerm);
        }
        Ok(Jet::new(self.anchor, pow_series(&self.coeffs, e, self.order())))
    }

    pub fn powi(&self, n: u32) -> Jet<S> {
        let mut acc = Jet::constant(self.anchor, S::one(), self.order());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// d/dx; the order drops by one (a constant jet stays order 0).
    pub fn derivative(&self) -> Jet<S> {
        if self.order() == 0 {
            return Jet::constant(self.anchor, S::zero(), 0);
        }
        let c = (1..=self.order())
            .map(|n| self.coeffs[n].scale(Real::from_f64(n as f64)))
            .collect();
        Jet::new(self.anchor, c)
    }

    /// Antiderivative with value `c0` at the anchor; the order rises by one.
    pub fn integral(&self, c0: S) -> Jet<S> {
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(c0);
        for (n, a) in self.coeffs.iter().enumerate() {
            c.push(a.scale(Real::ONE / ((n + 1) as f64)));
        }
        Jet::new(self.anchor, c)
    }

    /// Same polynomial re-expanded about `new_anchor`.
    pub fn recenter(&self, new_anchor: Real) -> Jet<S> {
        Jet::new(new_anchor, shift_series(&self.coeffs, new_anchor - self.anchor))
    }

    /// Value of the truncated polynomial at `x`.
    pub fn eval(&self, x: Real) -> S {
        eval_series(&self.coeffs, x - self.anchor)
    }
}

impl<S: Scalar> Add for &Jet<S> {
    type Output = Jet<S>;
    fn add(self, b: &Jet<S>) -> Jet<S> {
        debug_assert_eq!(self.anchor, b.anchor);
        let m = self.order().min(b.order());
        Jet::new(self.anchor, (0..=m).map(|i| self.coeffs[i] + b.coeffs[i]).collect())
    }
}

impl<S: Scalar> Sub for &Jet<S> {
    type Output = Jet<S>;
    fn sub(self, b: &Jet<S>) -> Jet<S> {
        debug_assert_eq!(self.anchor, b.anchor);
        let m = self.order().min(b.order());
        Jet::new(self.anchor, (0..=m).map(|i| self.coeffs[i] - b.coeffs[i]).collect())
    }
}

impl<S: Scalar> Mul for &Jet<S> {
    type Output = Jet<S>;
    fn mul(self, b: &Jet<S>) -> Jet<S> {
        debug_assert_eq!(self.anchor, b.anchor);
        let m = self.order().min(b.order());
        Jet::new(self.anchor, mul_series(&self.coeffs, &b.coeffs, m))
    }
}

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        Jet::new(self.anchor, self.coeffs.iter().map(|c| -*c).collect())
    }
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Jet<S>;
    fn add(self, b: Jet<S>) -> Jet<S> {
        &self + &b
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Jet<S>;
    fn sub(self, b: Jet<S>) -> Jet<S> {
        &self - &b
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Jet<S>;
    fn mul(self, b: Jet<S>) -> Jet<S> {
        &self * &b
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

impl Jet<Real> {
    pub fn to_complex(&self) -> Jet<super::complex::Complex> {
        Jet::new(
            self.anchor,
            self.coeffs.iter().map(|c| super::complex::Complex::real(*c)).collect(),
        )
    }

    pub fn cosh(&self) -> Jet<Real> {
        let e = self.exp();
        let ei = (-self).exp();
        (&e + &ei).scale(Real::HALF)
    }

    pub fn sinh(&self) -> Jet<Real> {
        let e = self.exp();
        let ei = (-self).exp();
        (&e - &ei).scale(Real::HALF)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(c: &[f64]) -> Jet {
        Jet::new(Real::ZERO, c.iter().map(|&x| Real::from_f64(x)).collect())
    }

    fn assert_coeffs(a: &Jet, want: &[f64], tol: f64) {
        assert_eq!(a.coeffs.len(), want.len());
        for (x, w) in a.coeffs.iter().zip(want) {
            assert!((*x - *w).abs().to_f64() <= tol, "{x:?} vs {w}");
        }
    }

    #[test]
    fn product_of_conjugates() {
        let a = j(&[1.0, 1.0, 0.0]);
        let b = j(&[1.0, -1.0, 0.0]);
        assert_coeffs(&(&a * &b), &[1.0, 0.0, -1.0], 0.0);
    }

    #[test]
    fn sqrt_binomial() {
        let a = j(&[1.0, 2.0]);
        assert_coeffs(&a.sqrt().unwrap(), &[1.0, 1.0], 1e-62);
    }

    #[test]
    fn exp_of_identity() {
        let x = Jet::<Real>::variable(Real::ZERO, 3);
        let e = x.exp();
        assert_coeffs(&e, &[1.0, 1.0, 0.5, 1.0 / 6.0], 1e-16);
        assert!((e.coeffs[3] * 6.0 - Real::ONE).abs().to_f64() < 1e-62);
    }

    #[test]
    fn zero_constant_is_rejected() {
        let a = j(&[0.0, 1.0]);
        assert_eq!(a.sqrt(), Err(JetError::ZeroConstantTerm));
        assert_eq!(j(&[1.0, 1.0]).div(&a), Err(JetError::ZeroConstantTerm));
        let b = Jet::new(Real::ONE, vec![Real::ONE, Real::ONE]);
        assert!(matches!(
            jet_ops(&a, JetOp::Add(&b)),
            Err(JetError::AnchorMismatch(..))
        ));
    }

    #[test]
    fn pow_and_log_agree_with_exp() {
        let a = Jet::new(Real::from_f64(0.7), vec![Real::from_f64(2.0), Real::from_f64(0.3), Real::from_f64(-0.1), Real::from_f64(0.05)]);
        let e = Real::from_f64(2.0) / 3.0;
        let p = a.powf(e).unwrap();
        let q = a.ln().unwrap().scale(e).exp();
        for (x, y) in p.coeffs.iter().zip(&q.coeffs) {
            assert!((*x - *y).abs().to_f64() < 1e-60);
        }
    }

    #[test]
    fn recenter_and_eval() {
        let a = j(&[1.0, -2.0, 0.5, 3.0]);
        let h = Real::from_f64(0.375);
        let b = a.recenter(h);
        assert_eq!(b.anchor, h);
        let x = Real::from_f64(-0.8);
        assert!((a.eval(x) - b.eval(x)).abs().to_f64() < 1e-60);
        assert!((b.coeffs[0] - a.eval(h)).abs().to_f64() < 1e-62);
    }

    #[test]
    fn derivative_and_integral() {
        let a = j(&[1.0, 2.0, 3.0]);
        assert_coeffs(&a.derivative(), &[2.0, 6.0], 0.0);
        assert_coeffs(&a.integral(Real::ZERO), &[0.0, 1.0, 1.0, 1.0], 0.0);
    }
}

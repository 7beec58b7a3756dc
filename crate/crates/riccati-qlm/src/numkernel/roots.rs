//! Bracketing root finder (Brent's method).

use thiserror::Error;

use super::real::{Real, QD_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError<E> {
    #[error("function values at the bracket ends have the same sign")]
    NoSignChange,
    #[error("root finder did not converge in {0} iterations")]
    MaxIterations(usize),
    #[error(transparent)]
    Eval(E),
}

#[derive(Clone, Copy, Debug)]
pub struct Root {
    pub x: Real,
    pub fx: Real,
    /// Final bracket, `lo <= x <= hi`.
    pub lo: Real,
    pub hi: Real,
    pub evaluations: usize,
}

const MAX_ITER: usize = 400;

/// Root of an infallible function.
pub fn root_find<F>(mut f: F, lo: Real, hi: Real, tol: Real) -> Result<Root, RootError<()>>
where
    F: FnMut(Real) -> Real,
{
    try_root_find(|x| Ok::<Real, ()>(f(x)), lo, hi, tol)
}

/// Brent's method on `[lo, hi]`; stops once the bracket is narrower than
/// `tol` (or an exact zero is hit). Evaluation errors abort the search.
pub fn try_root_find<F, E>(mut f: F, lo: Real, hi: Real, tol: Real) -> Result<Root, RootError<E>>
where
    F: FnMut(Real) -> Result<Real, E>,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a).map_err(RootError::Eval)?;
    let mut fb = f(b).map_err(RootError::Eval)?;
    let mut evals = 2;
    if fa.is_zero() {
        return Ok(Root { x: a, fx: fa, lo: a, hi: a, evaluations: evals });
    }
    if fb.is_zero() {
        return Ok(Root { x: b, fx: fb, lo: b, hi: b, evaluations: evals });
    }
    if fa.is_sign_negative() == fb.is_sign_negative() {
        return Err(RootError::NoSignChange);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.is_sign_negative() == fc.is_sign_negative() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = b.abs() * (2.0 * QD_EPS) + tol * 0.5;
        let xm = (c - b) * 0.5;
        if xm.abs() <= tol1 || fb.is_zero() {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(Root { x: b, fx: fb, lo, hi, evaluations: evals });
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = xm * s * 2.0;
                q = Real::ONE - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (xm * qq * (qq - r) * 2.0 - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > Real::ZERO {
                q = -q;
            }
            p = p.abs();
            let bound = (xm * q * 3.0 - (tol1 * q).abs()).min((e * q).abs());
            if p * 2.0 < bound {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else if xm > Real::ZERO {
            b += tol1;
        } else {
            b -= tol1;
        }
        fb = f(b).map_err(RootError::Eval)?;
        evals += 1;
    }
    Err(RootError::MaxIterations(MAX_ITER))
}

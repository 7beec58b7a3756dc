//! Adaptive double-exponential (tanh-sinh) quadrature.
//!
//! Each panel is integrated with successively halved tanh-sinh steps; panels
//! that fail to settle are bisected. Integrable endpoint singularities are
//! absorbed by the double-exponential clustering of nodes, the declared
//! exponent only decides how close to the endpoint the rule may sample.

use thiserror::Error;

use super::complex::Scalar;
use super::real::{Real, QD_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance {tol:e} (estimate {est:e})")]
    ToleranceUnreachable { tol: f64, est: f64 },
}

/// Behaviour of the integrand at the panel ends.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum Endpoint {
    #[default]
    Regular,
    /// `f ~ (x - end)^alpha` with `alpha > -1`.
    Singular(f64),
}

const MAX_LEVEL: usize = 7;
const MAX_DEPTH: usize = 14;
const T_MAX: f64 = 4.6;

/// `∫_a^b f`, absolute error about `tol·(1 + |result|)`.
pub fn quad<S, F>(f: F, a: Real, b: Real, tol: Real) -> Result<S, QuadError>
where
    S: Scalar,
    F: FnMut(Real) -> S,
{
    quad_with(f, a, b, tol, Endpoint::Regular, Endpoint::Regular)
}

/// As [`quad`] with declared endpoint behaviour.
pub fn quad_with<S, F>(
    mut f: F,
    a: Real,
    b: Real,
    tol: Real,
    left: Endpoint,
    right: Endpoint,
) -> Result<S, QuadError>
where
    S: Scalar,
    F: FnMut(Real) -> S,
{
    if a == b {
        return Ok(S::zero());
    }
    let mut est = Real::ZERO;
    let v = panel(&mut f, a, b, tol, left, right, 0, &mut est)?;
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn panel<S, F>(
    f: &mut F,
    a: Real,
    b: Real,
    tol: Real,
    left: Endpoint,
    right: Endpoint,
    depth: usize,
    worst: &mut Real,
) -> Result<S, QuadError>
where
    S: Scalar,
    F: FnMut(Real) -> S,
{
    match tanh_sinh(f, a, b, tol, left, right) {
        Ok(v) => Ok(v),
        Err((v, err)) => {
            if depth >= MAX_DEPTH {
                *worst = worst.max(err);
                let _ = v;
                return Err(QuadError::ToleranceUnreachable {
                    tol: tol.to_f64(),
                    est: err.to_f64(),
                });
            }
            let m = (a + b) * 0.5;
            let half = tol * 0.5;
            let l: S = panel(f, a, m, half, left, Endpoint::Regular, depth + 1, worst)?;
            let r: S = panel(f, m, b, half, Endpoint::Regular, right, depth + 1, worst)?;
            Ok(l + r)
        }
    }
}

// Node parameter beyond which an endpoint contributes below working
// precision: near a singular end the neglected piece is about d^(1+alpha)
// where d ~ 2 exp(-pi sinh t).
fn t_limit(e: Endpoint) -> f64 {
    match e {
        Endpoint::Regular => T_MAX,
        Endpoint::Singular(alpha) => {
            let p = (1.0 + alpha).max(0.05);
            let ln_d = (145.0 / p).min(690.0);
            (ln_d / std::f64::consts::PI).asinh().max(T_MAX)
        }
    }
}

// One panel; on failure returns the last estimate and its error.
fn tanh_sinh<S, F>(
    f: &mut F,
    a: Real,
    b: Real,
    tol: Real,
    left: Endpoint,
    right: Endpoint,
) -> Result<S, (S, Real)>
where
    S: Scalar,
    F: FnMut(Real) -> S,
{
    let hw = (b - a) * 0.5;
    let half_pi = Real::PI * 0.5;
    // Closest allowed approach to a regular endpoint: sampling there is
    // pointless and may hit the singular point of a neighbouring panel.
    let min_dist = |e: Endpoint| -> Real {
        match e {
            Endpoint::Regular => hw.abs() * 1e-60,
            Endpoint::Singular(_) => Real::ZERO,
        }
    };
    let (min_l, min_r) = (min_dist(left), min_dist(right));
    let (t_l, t_r) = (t_limit(left), t_limit(right));
    let t_max = t_l.max(t_r);

    let eval_pair = |t: Real, f: &mut F| -> S {
        let sh = t.sinh();
        let ch = (Real::ONE + sh.sqr()).sqrt();
        let u = half_pi * sh;
        let eu = u.exp();
        let e2 = eu.sqr();
        let delta = Real::TWO / (e2 + 1.0);
        let cosh_u = (eu + eu.recip()) * 0.5;
        let w = half_pi * ch / cosh_u.sqr();
        let d = hw.abs() * delta;
        let mut s = S::zero();
        let tf = t.to_f64();
        if tf <= t_r && !(d <= min_r) && !d.is_zero() {
            let x = if hw.is_sign_negative() { b + d } else { b - d };
            if x != b {
                s += f(x).scale(w);
            }
        }
        if t.is_zero() {
            return s;
        }
        if tf <= t_l && !(d <= min_l) && !d.is_zero() {
            let x = if hw.is_sign_negative() { a - d } else { a + d };
            if x != a {
                s += f(x).scale(w);
            }
        }
        s
    };

    let n0 = t_max.ceil() as usize;
    let mut sum = S::zero();
    for j in 0..=n0 {
        sum += eval_pair(Real::from_f64(j as f64), f);
    }
    let mut prev = sum.scale(hw);
    let mut h = Real::ONE;
    let mut last_err = Real::INFINITY;
    for level in 1..=MAX_LEVEL {
        h = h * 0.5;
        let count = (t_max / h.to_f64()).ceil() as usize;
        let mut j = 1;
        while j <= count {
            sum += eval_pair(h * (j as f64), f);
            j += 2;
        }
        let cur = sum.scale(h * hw);
        let err = (cur - prev).norm();
        let scale = Real::ONE + cur.norm();
        if level >= 3 && (err <= tol * scale * 0.1 || err <= scale * QD_EPS * 64.0) {
            return Ok(cur);
        }
        // Once the error is squaring each level the next one is converged.
        if level >= 4 && err * err / (last_err.max(Real::from_f64(1e-300))) <= tol * scale * 1e-3
            && err <= last_err * 1e-3
        {
            return Ok(cur);
        }
        last_err = err;
        prev = cur;
    }
    Err((prev, last_err))
}

//! Adaptive Taylor-series integration with piecewise-polynomial dense output.
//!
//! Each step expands the solution to order `M` about the step origin, so the
//! stored segment polynomial *is* the dense output and interpolation costs
//! nothing extra. Step sizes follow the decay of the last two coefficients.

use thiserror::Error;

use super::complex::Scalar;
use super::jet::{eval_series, eval_series_deriv, Jet};
use super::real::{Real, QD_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),
    #[error("tolerance {0:e} is below what the working precision can deliver")]
    ToleranceUnreachable(f64),
    #[error("point {0} lies outside the integrated span")]
    OutOfSpan(f64),
}

/// Which variable a segment stores: `y` itself or `w = 1/y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize)]
pub enum Chart {
    #[default]
    Direct,
    Inverse,
}

/// One polynomial piece on `[lo, hi]`, expanded about `anchor`.
#[derive(Clone, Debug)]
pub struct Segment<S: Scalar> {
    pub lo: Real,
    pub hi: Real,
    pub anchor: Real,
    pub chart: Chart,
    /// One coefficient vector per state component.
    pub coeffs: Vec<Vec<S>>,
}

impl<S: Scalar> Segment<S> {
    pub fn contains(&self, t: Real) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn eval(&self, comp: usize, t: Real) -> S {
        eval_series(&self.coeffs[comp], t - self.anchor)
    }

    pub fn eval_deriv(&self, comp: usize, t: Real) -> S {
        eval_series_deriv(&self.coeffs[comp], t - self.anchor)
    }

    pub fn width(&self) -> Real {
        self.hi - self.lo
    }
}

/// Dense solution over a span, tiled by segments sorted by `lo`.
#[derive(Clone, Debug)]
pub struct DensePath<S: Scalar> {
    pub segments: Vec<Segment<S>>,
    pub tol: Real,
}

impl<S: Scalar> DensePath<S> {
    pub fn new(mut segments: Vec<Segment<S>>, tol: Real) -> DensePath<S> {
        segments.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("finite breakpoints"));
        DensePath { segments, tol }
    }

    pub fn span(&self) -> (Real, Real) {
        (
            self.segments.first().map_or(Real::ZERO, |s| s.lo),
            self.segments.last().map_or(Real::ZERO, |s| s.hi),
        )
    }

    pub fn locate(&self, t: Real) -> Result<usize, OdeError> {
        let (lo, hi) = self.span();
        if t < lo || t > hi || self.segments.is_empty() {
            return Err(OdeError::OutOfSpan(t.to_f64()));
        }
        let i = self.segments.partition_point(|s| s.hi < t);
        Ok(i.min(self.segments.len() - 1))
    }

    /// Stored component value at `t` (in the segment's own chart).
    pub fn eval(&self, comp: usize, t: Real) -> Result<S, OdeError> {
        let i = self.locate(t)?;
        Ok(self.segments[i].eval(comp, t))
    }

    /// Intervals whose segments store the inverse variable.
    pub fn pole_flags(&self) -> Vec<(Real, Real)> {
        let mut out: Vec<(Real, Real)> = Vec::new();
        for s in self.segments.iter().filter(|s| s.chart == Chart::Inverse) {
            match out.last_mut() {
                Some(last) if last.1 == s.lo => last.1 = s.hi,
                _ => out.push((s.lo, s.hi)),
            }
        }
        out
    }
}

/// A system whose right-hand side can be expanded coefficient by
/// coefficient: given the state coefficients `x[i][0..=n]` about `t0`, return
/// the `n`-th Taylor coefficient of every rate component.
pub trait TaylorSystem<S: Scalar> {
    fn dim(&self) -> usize;
    fn rate_coeff(&mut self, t0: Real, x: &[Vec<S>], n: usize) -> Vec<S>;
}

/// Adapter turning a jet-level vector field `f(t, x)` into a
/// [`TaylorSystem`]. Costs `O(M^3)` per step, fine for small systems.
pub struct JetField<F> {
    pub dim: usize,
    pub field: F,
}

impl<S, F> TaylorSystem<S> for JetField<F>
where
    S: Scalar,
    F: FnMut(&Jet<S>, &[Jet<S>]) -> Vec<Jet<S>>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn rate_coeff(&mut self, t0: Real, x: &[Vec<S>], n: usize) -> Vec<S> {
        let mut tj = Jet::<S>::constant(t0, S::from_real(t0), n);
        if n >= 1 {
            tj.coeffs[1] = S::one();
        }
        let xs: Vec<Jet<S>> = x.iter().map(|c| Jet::new(t0, c[..=n].to_vec())).collect();
        let r = (self.field)(&tj, &xs);
        r.into_iter()
            .map(|j| j.coeffs.get(n).copied().unwrap_or_else(S::zero))
            .collect()
    }
}

/// Taylor order adequate for a relative tolerance.
pub fn order_for_tol(tol: Real) -> usize {
    let digits = -tol.to_f64().log10();
    ((digits * 1.15) as usize + 6).clamp(12, 80)
}

/// Expands the solution through `x0` at `t0` to the given order.
pub fn taylor_expand<S: Scalar, T: TaylorSystem<S>>(
    sys: &mut T,
    t0: Real,
    x0: &[S],
    order: usize,
) -> Vec<Vec<S>> {
    let mut x: Vec<Vec<S>> = x0.iter().map(|v| vec![*v]).collect();
    for n in 0..order {
        let r = sys.rate_coeff(t0, &x, n);
        let inv = Real::ONE / ((n + 1) as f64);
        for (xi, ri) in x.iter_mut().zip(r) {
            xi.push(ri.scale(inv));
        }
    }
    x
}

/// Largest step for which the truncated tail stays below `tol·(1 + |x|)`.
/// Worked out in `f64` logarithms; the step size needs no extra precision.
pub fn step_from_coeffs<S: Scalar>(x: &[Vec<S>], tol: Real) -> Option<Real> {
    let m = x[0].len() - 1;
    let scale = 1.0 + x.iter().map(|c| c[0].norm().to_f64()).fold(0.0, f64::max);
    let budget = tol.to_f64().ln() + scale.ln();
    let mut h: Option<f64> = None;
    for j in [m - 1, m] {
        let mut cj = 0.0f64;
        for c in x {
            let v = c[j].norm().to_f64();
            if !v.is_finite() {
                return Some(Real::ZERO);
            }
            cj = cj.max(v);
        }
        if cj == 0.0 {
            continue;
        }
        let hj = ((budget - cj.ln()) / j as f64).exp();
        h = Some(h.map_or(hj, |v| v.min(hj)));
    }
    h.map(|v| Real::from_f64(if v.is_finite() { v * 0.9 } else { 0.0 }))
}

/// Integrates `sys` from `span.0` to `span.1` (either direction).
pub fn ode_solve<S: Scalar, T: TaylorSystem<S>>(
    sys: &mut T,
    init: &[S],
    span: (Real, Real),
    tol: Real,
) -> Result<DensePath<S>, OdeError> {
    if tol.to_f64() < 10.0 * QD_EPS * 1e2 {
        return Err(OdeError::ToleranceUnreachable(tol.to_f64()));
    }
    let (t_start, t_end) = span;
    let dir = if t_end >= t_start { Real::ONE } else { -Real::ONE };
    let total = (t_end - t_start).abs();
    let order = order_for_tol(tol);
    let h_min = total * tol.sqrt() * 1e-3;
    let mut t = t_start;
    let mut x: Vec<S> = init.to_vec();
    let mut segments = Vec::new();
    let mut steps = 0usize;
    while (t_end - t) * dir > Real::ZERO {
        let coeffs = taylor_expand(sys, t, &x, order);
        let remaining = (t_end - t).abs();
        let h = step_from_coeffs(&coeffs, tol).unwrap_or(remaining).min(remaining);
        if h < h_min && h < remaining {
            return Err(OdeError::StepUnderflow(t.to_f64()));
        }
        steps += 1;
        if steps > 1_000_000 {
            return Err(OdeError::StepUnderflow(t.to_f64()));
        }
        let t_next = if h == remaining { t_end } else { t + h * dir };
        let dt = t_next - t;
        x = coeffs.iter().map(|c| eval_series(c, dt)).collect();
        let (lo, hi) = if dir > Real::ZERO { (t, t_next) } else { (t_next, t) };
        segments.push(Segment { lo, hi, anchor: t, chart: Chart::Direct, coeffs });
        t = t_next;
    }
    Ok(DensePath::new(segments, tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_decay() -> JetField<impl FnMut(&Jet<Real>, &[Jet<Real>]) -> Vec<Jet<Real>>> {
        JetField { dim: 1, field: |_t: &Jet<Real>, x: &[Jet<Real>]| vec![-&x[0]] }
    }

    fn riccati() -> JetField<impl FnMut(&Jet<Real>, &[Jet<Real>]) -> Vec<Jet<Real>>> {
        JetField {
            dim: 1,
            field: |_t: &Jet<Real>, x: &[Jet<Real>]| {
                let sq = &x[0] * &x[0];
                vec![-(sq.add_scalar(Real::ONE))]
            },
        }
    }

    #[test]
    fn exponential_decay() {
        let tol = Real::pow10(-40);
        let p = ode_solve(&mut field_decay(), &[Real::ONE], (Real::ZERO, Real::ONE), tol).unwrap();
        let v = p.eval(0, Real::ONE).unwrap();
        assert!((v - (-Real::ONE).exp()).abs() < tol);
        let mid = Real::from_f64(0.37);
        assert!((p.eval(0, mid).unwrap() - (-mid).exp()).abs() < tol);
    }

    #[test]
    fn riccati_matches_minus_tan() {
        let tol = Real::pow10(-36);
        let end = Real::from_f64(1.5);
        let p = ode_solve(&mut riccati(), &[Real::ZERO], (Real::ZERO, end), tol).unwrap();
        for z in [0.1, 0.7, 1.2, 1.5] {
            let z = Real::from_f64(z);
            let (s, c) = z.sin_cos();
            let want = -(s / c);
            let got = p.eval(0, z).unwrap();
            assert!((got - want).abs() < tol * (Real::ONE + want.abs()) * 10.0, "{z}");
        }
    }

    #[test]
    fn leftward_integration() {
        let tol = Real::pow10(-40);
        let p = ode_solve(&mut field_decay(), &[Real::ONE], (Real::ONE, Real::ZERO), tol).unwrap();
        let v = p.eval(0, Real::ZERO).unwrap();
        assert!((v - Real::ONE.exp()).abs() < tol * 10.0);
    }

    #[test]
    fn pole_of_tangent_underflows() {
        let r = ode_solve(&mut riccati(), &[Real::ZERO], (Real::ZERO, Real::TWO), Real::pow10(-30));
        assert!(matches!(r, Err(OdeError::StepUnderflow(_))));
    }

    #[test]
    fn tighter_tolerance_reduces_error() {
        let end = Real::from_f64(1.2);
        let (s, c) = end.sin_cos();
        let want = -(s / c);
        let mut errs = Vec::new();
        for d in [12, 20] {
            let tol = Real::pow10(-d);
            let p = ode_solve(&mut riccati(), &[Real::ZERO], (Real::ZERO, end), tol).unwrap();
            errs.push((p.eval(0, end).unwrap() - want).abs());
        }
        assert!(errs[1] <= errs[0] * 0.5 || errs[1].is_zero());
    }

    #[test]
    fn unreachable_tolerance() {
        let r = ode_solve(&mut field_decay(), &[Real::ONE], (Real::ZERO, Real::ONE), Real::pow10(-70));
        assert!(matches!(r, Err(OdeError::ToleranceUnreachable(_))));
    }
}

//! Quasilinearization of the Riccati equation `y' + k² + y² = 0`.
//!
//! Each iterate solves the linear equation
//! `y_p' = y_{p−1}² − 2 y_p y_{p−1} − k²` from the right boundary
//! `y_p(z0) = ik(z0)` towards the left. Near nodes of the wave function the
//! log-derivative has poles, so there the inverse variable `w = 1/y` is
//! iterated instead, linearizing `w' = 1 + k² w²`:
//! `w_p' = 1 + k²(2 w_{p−1} w_p − w_{p−1}²)`.
//!
//! All iterates of one problem share a mesh of Taylor cells anchored at
//! their right ends; cells are split when a step misses the tolerance.

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::jet::{div_series, eval_series, mul_series, shift_series, sqrt_series};
use crate::numkernel::ode::{order_for_tol, step_from_coeffs};
use crate::numkernel::{
    quad_with, Chart, Complex, DensePath, Jet, Endpoint, OdeError, QuadError, Real, Scalar, Segment,
};
use crate::potentials::{Domain, KForm, PotentialError, PotentialModel};
use crate::wkb::{LangerGuess, Side, WkbError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QlmError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Wkb(#[from] WkbError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("step size underflow at z = {0}")]
    StepUnderflow(f64),
    #[error("iteration diverged: norms {0:?}")]
    Diverged(Vec<f64>),
    #[error("the boundary point z0 = {0} is not in a forbidden region")]
    BoundaryNotForbidden(f64),
    #[error("iterates live on different spans")]
    SpanMismatch,
}

/// Zeroth iterate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GuessKind {
    #[default]
    Langer,
    Ik,
}

/// Hysteresis factor of the pole switch.
pub const Y_HI: f64 = 10.0;

/// Scalars the iteration can run in. Bound-state iterates from a real
/// guess stay real; the `ik` guess needs complex values.
pub trait QlmScalar: Scalar {
    /// `i k` for the given `k²`, if representable.
    fn ik(k2: Real) -> Option<Self>;
    fn real_part(self) -> Real;
    /// Pole locations of an iterate stored on `path`.
    fn poles(path: &DensePath<Self>) -> Vec<Real>;
}

impl QlmScalar for Real {
    fn ik(k2: Real) -> Option<Real> {
        if k2 < Real::ZERO {
            Some(-(-k2).sqrt())
        } else {
            None
        }
    }
    fn real_part(self) -> Real {
        self
    }
    fn poles(path: &DensePath<Real>) -> Vec<Real> {
        find_poles(path)
    }
}

impl QlmScalar for Complex {
    fn ik(k2: Real) -> Option<Complex> {
        Some(Complex::new(k2, Real::ZERO).sqrt().mul_i())
    }
    fn real_part(self) -> Real {
        self.re
    }
    fn poles(_path: &DensePath<Complex>) -> Vec<Real> {
        Vec::new()
    }
}

/// One mesh cell `[lo, hi]`. Cells right of the join point are anchored at
/// `hi` and integrated leftward; cells left of it are anchored at `lo`.
#[derive(Clone, Debug)]
pub struct Cell {
    pub lo: Real,
    pub hi: Real,
    pub anchor: Real,
    pub chart: Chart,
    /// Inside a tiny window around a turning point of the `ik` guess, where
    /// the iterate is carried as a constant.
    pub gap: bool,
    /// Taylor coefficients of `k²` about `anchor`.
    pub k2: Vec<Real>,
}

impl Cell {
    fn leftward(&self) -> bool {
        self.anchor == self.hi
    }
}

/// One bound-state problem at a fixed trial energy.
#[derive(Clone, Debug)]
pub struct Problem {
    pub model: PotentialModel,
    pub e: Real,
    pub n: usize,
    pub tol: Real,
    pub order: usize,
    pub z_left: Real,
    pub z0: Real,
    /// Meeting point of the piece integrated from `z0` and the piece
    /// integrated from `z_left`.
    pub z_join: Real,
    /// Turning points of the Langer form.
    pub a: Real,
    pub b: Real,
    /// Left boundary value of `y`.
    pub y_left: Real,
    pub langer: Option<LangerGuess>,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug)]
pub struct Iterate<S: Scalar> {
    pub p: usize,
    pub e: Real,
    pub path: DensePath<S>,
    pub pole_locations: Vec<Real>,
    pub boundary: S,
    pub z_join: Real,
    /// Set for the `ik` guess, whose turning-point singularities propagate.
    pub flagged: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConvergenceReport {
    pub norms: Vec<Real>,
    pub ratios: Vec<Real>,
    /// Fitted exponent in `norms[p] ≈ K norms[p−1]^q`.
    pub exponent: Option<f64>,
    pub quadratic: bool,
}

fn real(x: f64) -> Real {
    Real::from_f64(x)
}

impl Problem {
    /// Sets up the span for level `n` at energy `e`, with tolerances
    /// derived from `digits`.
    pub fn new(model: &PotentialModel, e: Real, n: usize, digits: u32) -> Result<Problem, QlmError> {
        let tol = Real::pow10(-(digits as i32));
        let tail = Real::pow10(-(digits as i32 / 2 + 3));
        let (a, b) = model.turning_points(e, KForm::Langer)?;
        let (_, b_plain) = model.turning_points(e, KForm::Plain).unwrap_or((a, b));
        let z0 = model.action_point(e, b_plain.max(b), tail, 1.0, KForm::Plain)?;
        let mut pb = Problem {
            model: model.clone(),
            e,
            n,
            tol,
            order: order_for_tol(tol),
            z_left: a,
            z0,
            z_join: a,
            a,
            b,
            y_left: Real::ZERO,
            langer: None,
            cells: Vec::new(),
        };
        match model.domain {
            Domain::HalfLine => {
                // The regular solution is carried from a point deep inside the
                // centrifugal region to a tenth of the left turning point.
                let z_start = a * Real::pow10(-(digits as i32 + 6));
                let z_left = a * 0.1;
                pb.y_left = pb.regular_solution(z_start, z_left)?;
                pb.z_left = z_left;
            }
            Domain::FullLine => {
                let (a_plain, _) = model.turning_points(e, KForm::Plain)?;
                pb.z_left = model.action_point(e, a_plain.min(a), tail, -1.0, KForm::Plain)?;
                pb.y_left = pb.decaying_start()?;
            }
        }
        pb.z_join = pb.z_left;
        Ok(pb)
    }

    // y of the regular solution at `z_end`. With `u = z y` and `t = ln z`
    // the Riccati equation reads `u' = u − u² − z² k²`, whose Taylor
    // coefficients stay of order one down to the origin; `u → s` there with
    // `s(s − 1) = −lim z² k²`.
    fn regular_solution(&self, z_start: Real, z_end: Real) -> Result<Real, QlmError> {
        let m = self.order;
        let f_at = |t: Real, order: usize| -> Result<Vec<Real>, QlmError> {
            let z = Jet::<Real>::variable(Real::ZERO, order).exp().scale(t.exp());
            let k2 = self.model.k2_of_jet(self.e, &z)?;
            Ok(mul_series(&mul_series(&z.coeffs, &z.coeffs, order), &k2.coeffs, order))
        };
        let mut t = z_start.ln();
        let t_end = z_end.ln();
        let f0 = f_at(t, 0)?[0];
        let mut u = Real::HALF + (Real::ONE / 4.0 - f0).sqrt();
        let mut guard = 0usize;
        while t < t_end {
            guard += 1;
            if guard > 100_000 {
                return Err(QlmError::StepUnderflow(t.exp().to_f64()));
            }
            let f = f_at(t, m)?;
            // (n+1) u_{n+1} = u_n − [u²]_n − F_n
            let mut c = Vec::with_capacity(m + 1);
            c.push(u);
            for n in 0..m {
                let mut sq = Real::ZERO;
                for j in 0..=n {
                    sq += c[j] * c[n - j];
                }
                c.push((c[n] - sq - f[n]) / ((n + 1) as f64));
            }
            let room = t_end - t;
            // Unit steps at most: F grows like e^{2τ} and faster.
            let h = step_from_coeffs(&[c.clone()], self.tol).unwrap_or(room).min(room).min(Real::ONE);
            if h.is_zero() {
                return Err(QlmError::StepUnderflow(t.exp().to_f64()));
            }
            u = eval_series(&c, h);
            t = if h == room { t_end } else { t + h };
        }
        Ok(u / z_end)
    }

    // y = |k| − (k²)'/(4k²) at z_left: the branch decaying to the left.
    fn decaying_start(&self) -> Result<Real, QlmError> {
        let k2 = self.k2_coeffs(self.z_left)?;
        if k2[0] >= Real::ZERO {
            return Err(QlmError::BoundaryNotForbidden(self.z_left.to_f64()));
        }
        Ok((-k2[0]).sqrt() - k2[1] / (k2[0] * 4.0))
    }

    pub fn k2_coeffs(&self, z: Real) -> Result<Vec<Real>, QlmError> {
        Ok(self.model.k2_jet_z(self.e, z, self.model.order_at(z, self.order), KForm::Plain)?)
    }

    fn k2_value(&self, z: Real) -> Result<Real, QlmError> {
        Ok(self.model.k2_at_z(self.e, z, KForm::Plain)?)
    }

    // |y| above which the inverse variable takes over.
    fn pole_scale(&self, z: Real, k2: Real) -> Real {
        let mut s = Real::ONE + k2.abs().sqrt();
        if self.model.domain == Domain::HalfLine {
            s += real(self.model.l as f64 + 1.0) / z.abs();
        }
        s
    }

    fn boundary<S: QlmScalar>(&self) -> Result<S, QlmError> {
        let k2 = self.k2_value(self.z0)?;
        S::ik(k2).ok_or(QlmError::BoundaryNotForbidden(self.z0.to_f64()))
    }

    /// `y` of the solution that is regular at the origin (half-line) or
    /// decays to the left (full line), at `z_left`.
    pub fn left_boundary(&self) -> Result<Real, QlmError> {
        Ok(self.y_left)
    }

    // Steps the Langer guess from `start` to `end`, choosing charts with
    // hysteresis on |y|/s(z).
    fn march_guess(
        &self,
        guess: &LangerGuess,
        side: Side,
        start: Real,
        end: Real,
        cells: &mut Vec<Cell>,
        segs: &mut Vec<Segment<Real>>,
    ) -> Result<(), QlmError> {
        let d = if end > start { Real::ONE } else { -Real::ONE };
        let span = (end - start).abs();
        let mut za = start;
        let mut chart = Chart::Direct;
        let mut guard = 0usize;
        while (end - za) * d > Real::ZERO {
            guard += 1;
            if guard > 200_000 {
                return Err(QlmError::StepUnderflow(za.to_f64()));
            }
            let m = self.model.order_at(za, self.order);
            let jets = guess.jets(side, za, m)?;
            let coeffs = match chart {
                Chart::Direct => div_series(&jets.v, &jets.u, m),
                Chart::Inverse => div_series(&jets.u, &jets.v, m),
            };
            let k2 = self.k2_coeffs(za)?;
            let room = (end - za).abs();
            let h1 = step_from_coeffs(&[coeffs.clone()], self.tol).unwrap_or(room);
            let h2 = step_from_coeffs(&[k2.clone()], self.tol).unwrap_or(room);
            let mut h = h1.min(h2).min(room);
            if h.is_zero() || h < span * Real::pow10(-40) {
                return Err(QlmError::StepUnderflow(za.to_f64()));
            }
            let test = |t: Real| -> bool {
                let v = eval_series(&coeffs, t * d);
                let s = self.pole_scale(za + t * d, eval_series(&k2, t * d));
                match chart {
                    Chart::Direct => v.abs() > s * Y_HI,
                    Chart::Inverse => v.abs() * s > Real::ONE,
                }
            };
            let mut switch = false;
            let samples = 12;
            let mut prev_t = Real::ZERO;
            for i in 1..=samples {
                let t = h * (i as f64 / samples as f64);
                if test(t) {
                    let (mut lo_t, mut hi_t) = (prev_t, t);
                    for _ in 0..60 {
                        let mid = (lo_t + hi_t) * 0.5;
                        if test(mid) {
                            hi_t = mid;
                        } else {
                            lo_t = mid;
                        }
                    }
                    h = hi_t;
                    switch = true;
                    break;
                }
                prev_t = t;
            }
            if switch && h < span * Real::pow10(-14) {
                chart = flip(chart);
                continue;
            }
            let zb = if h == room { end } else { za + h * d };
            let (lo, hi) = if d > Real::ZERO { (za, zb) } else { (zb, za) };
            cells.push(Cell { lo, hi, anchor: za, chart, gap: false, k2 });
            segs.push(Segment { lo, hi, anchor: za, chart, coeffs: vec![coeffs] });
            if switch {
                chart = flip(chart);
            }
            za = zb;
        }
        Ok(())
    }

    /// Builds the mesh and the Langer zeroth iterate. The branch decaying
    /// to the right is used from `z0` down to the join point and the branch
    /// regular on the left from `z_left` up to it.
    pub fn langer_guess(&mut self) -> Result<Iterate<Real>, QlmError> {
        let guess = LangerGuess::new(&self.model, self.e, self.n, self.z_left, self.z0, self.tol)?;
        let mut cells = Vec::new();
        let mut segs = Vec::new();
        self.z_join = guess.z_switch;
        self.march_guess(&guess, Side::B, self.z0, self.z_join, &mut cells, &mut segs)?;
        self.march_guess(&guess, Side::A, self.z_left, self.z_join, &mut cells, &mut segs)?;
        cells.sort_by(|p, q| p.lo.partial_cmp(&q.lo).expect("finite"));
        self.cells = cells;
        self.langer = Some(guess);
        let path = DensePath::new(segs, self.tol);
        let boundary = path.segments.last().expect("nonempty").coeffs[0][0];
        let mut it = Iterate {
            p: 0,
            e: self.e,
            path,
            pole_locations: Vec::new(),
            boundary,
            z_join: self.z_join,
            flagged: false,
        };
        it.pole_locations = find_poles(&it.path);
        Ok(it)
    }

    /// Builds the mesh for the `ik` zeroth iterate, integrated from `z0`
    /// all the way to `z_left`. Cells shrink geometrically towards each
    /// turning point and a window of width `10^{−(2d/3+2)}` around it is
    /// bridged with a constant.
    pub fn ik_guess(&mut self) -> Result<Iterate<Complex>, QlmError> {
        let digits = -self.tol.to_f64().log10();
        let gap = Real::pow10(-((2.0 * digits / 3.0) as i32 + 2));
        let (a_p, b_p) = self.model.turning_points(self.e, KForm::Plain)?;
        let tps: Vec<Real> = [b_p, a_p].into_iter().filter(|t| *t > self.z_left && !t.is_zero()).collect();
        let mut cells = Vec::new();
        let mut segs = Vec::new();
        let mut z_hi = self.z0;
        let mut guard = 0usize;
        while z_hi > self.z_left {
            guard += 1;
            if guard > 200_000 {
                return Err(QlmError::StepUnderflow(z_hi.to_f64()));
            }
            let k2 = self.k2_coeffs(z_hi)?;
            let next_tp = tps.iter().copied().filter(|t| *t < z_hi).fold(None, |acc: Option<Real>, t| {
                Some(acc.map_or(t, |v| v.max(t)))
            });
            if let Some(tp) = next_tp {
                if z_hi - tp <= gap * (Real::ONE + tp.abs()) {
                    let lo = (tp - (z_hi - tp)).max(self.z_left);
                    cells.push(Cell { lo, hi: z_hi, anchor: z_hi, chart: Chart::Direct, gap: true, k2: k2.clone() });
                    segs.push(Segment {
                        lo,
                        hi: z_hi,
                        anchor: z_hi,
                        chart: Chart::Direct,
                        coeffs: vec![vec![Complex::ZERO]],
                    });
                    z_hi = lo;
                    continue;
                }
            }
            let kc: Vec<Complex> = k2.iter().map(|c| Complex::new(*c, Real::ZERO)).collect();
            let y: Vec<Complex> = sqrt_series(&kc, kc.len() - 1).into_iter().map(|c| c.mul_i()).collect();
            let limit = next_tp.map_or(self.z_left, |t| t + gap * (Real::ONE + t.abs()) * 0.5).max(self.z_left);
            let room = z_hi - limit;
            let h = step_from_coeffs(&[y.clone()], self.tol)
                .unwrap_or(room)
                .min(step_from_coeffs(&[k2.clone()], self.tol).unwrap_or(room))
                .min(room);
            if h.is_zero() {
                return Err(QlmError::StepUnderflow(z_hi.to_f64()));
            }
            let z_lo = if h == room { limit } else { z_hi - h };
            cells.push(Cell { lo: z_lo, hi: z_hi, anchor: z_hi, chart: Chart::Direct, gap: false, k2 });
            segs.push(Segment { lo: z_lo, hi: z_hi, anchor: z_hi, chart: Chart::Direct, coeffs: vec![y] });
            z_hi = z_lo;
        }
        // Gap cells carry the value reached on their right.
        for i in 0..segs.len() {
            if cells[i].gap && i > 0 {
                let prev = &segs[i - 1];
                let v = eval_series(&prev.coeffs[0], prev.lo - prev.anchor);
                segs[i].coeffs[0][0] = v;
            }
        }
        cells.reverse();
        self.cells = cells;
        self.z_join = self.z_left;
        let path = DensePath::new(segs, self.tol);
        let boundary = path.segments.last().expect("nonempty").coeffs[0][0];
        Ok(Iterate {
            p: 0,
            e: self.e,
            path,
            pole_locations: Vec::new(),
            boundary,
            z_join: self.z_join,
            flagged: true,
        })
    }

    fn split_cell(&mut self, i: usize) -> Result<(), QlmError> {
        let c = self.cells[i].clone();
        let mid = Real::from_f64(((c.lo + c.hi) * 0.5).to_f64());
        let mid = if mid > c.lo && mid < c.hi { mid } else { (c.lo + c.hi) * 0.5 };
        let (left, right) = if c.leftward() {
            (
                Cell { lo: c.lo, hi: mid, anchor: mid, k2: self.k2_coeffs(mid)?, ..c.clone() },
                Cell { lo: mid, ..c },
            )
        } else {
            (
                Cell { hi: mid, ..c.clone() },
                Cell { lo: mid, hi: c.hi, anchor: mid, k2: self.k2_coeffs(mid)?, ..c },
            )
        };
        self.cells[i] = right;
        self.cells.insert(i, left);
        Ok(())
    }

    // Solves one cell from the value `x` at its anchor, or reports that it
    // needs splitting.
    fn solve_cell<S: QlmScalar>(&self, prev: &Iterate<S>, cell: &Cell, x: S) -> Option<Vec<S>> {
        if cell.gap {
            return Some(vec![x]);
        }
        let m = cell.k2.len() - 1;
        let pc = prev_coeffs(prev, cell, m);
        let kc: Vec<S> = cell.k2.iter().map(|c| S::from_real(*c)).collect();
        let coeffs = match cell.chart {
            Chart::Direct => direct_coeffs(&pc, &kc, x, m),
            Chart::Inverse => inverse_coeffs(&pc, &kc, x, m),
        };
        if tail_ok(&coeffs, cell.hi - cell.lo, self.tol) {
            Some(coeffs)
        } else {
            None
        }
    }

    // The new iterate's poles drift away from the previous one's, so the
    // chart of a cell follows the value entering it.
    fn rechart<S: Scalar>(&mut self, idx: usize, x: &mut S, chart: Chart) -> Chart {
        let cell = &self.cells[idx];
        if cell.gap {
            return chart;
        }
        let s = self.pole_scale(cell.anchor, cell.k2[0]);
        let v = x.norm();
        let flip_to = match chart {
            Chart::Direct if v > s * real(Y_HI) => Chart::Inverse,
            Chart::Inverse if v > s => Chart::Direct,
            _ => return chart,
        };
        self.cells[idx].chart = flip_to;
        *x = S::one() / *x;
        flip_to
    }

    /// One iteration step from `prev` on the shared mesh.
    pub fn qlm_step<S: QlmScalar>(&mut self, prev: &Iterate<S>) -> Result<Iterate<S>, QlmError> {
        let boundary: S = self.boundary::<S>()?;
        let mut segs: Vec<Segment<S>> = Vec::with_capacity(self.cells.len());
        let mut splits = 0usize;
        let min_width = (self.z0 - self.z_left) * Real::pow10(-40);
        // Right piece, leftward from z0.
        let mut x = boundary;
        let mut x_chart = Chart::Direct;
        let mut i = self.cells.len();
        while i > 0 && self.cells[i - 1].leftward() {
            let idx = i - 1;
            if self.cells[idx].chart != x_chart {
                x = S::one() / x;
                x_chart = self.cells[idx].chart;
            }
            x_chart = self.rechart(idx, &mut x, x_chart);
            let cell = self.cells[idx].clone();
            match self.solve_cell(prev, &cell, x) {
                Some(coeffs) => {
                    x = eval_series(&coeffs, cell.lo - cell.anchor);
                    segs.push(Segment { lo: cell.lo, hi: cell.hi, anchor: cell.anchor, chart: cell.chart, coeffs: vec![coeffs] });
                    i -= 1;
                }
                None => {
                    splits += 1;
                    if splits > 10_000 || cell.hi - cell.lo < min_width {
                        return Err(QlmError::StepUnderflow(cell.hi.to_f64()));
                    }
                    self.split_cell(idx)?;
                    i = idx + 2;
                }
            }
        }
        // Left piece, rightward from z_left.
        let n_left = i;
        if n_left > 0 {
            let mut x = S::from_real(self.left_boundary()?);
            let mut x_chart = Chart::Direct;
            let mut j = 0;
            let mut end = n_left;
            while j < end {
                if self.cells[j].chart != x_chart {
                    x = S::one() / x;
                    x_chart = self.cells[j].chart;
                }
                x_chart = self.rechart(j, &mut x, x_chart);
                let cell = self.cells[j].clone();
                match self.solve_cell(prev, &cell, x) {
                    Some(coeffs) => {
                        x = eval_series(&coeffs, cell.hi - cell.anchor);
                        segs.push(Segment { lo: cell.lo, hi: cell.hi, anchor: cell.anchor, chart: cell.chart, coeffs: vec![coeffs] });
                        j += 1;
                    }
                    None => {
                        splits += 1;
                        if splits > 10_000 || cell.hi - cell.lo < min_width {
                            return Err(QlmError::StepUnderflow(cell.lo.to_f64()));
                        }
                        self.split_cell(j)?;
                        end += 1;
                    }
                }
            }
        }
        let path = DensePath::new(segs, self.tol);
        let mut it = Iterate {
            p: prev.p + 1,
            e: self.e,
            path,
            pole_locations: Vec::new(),
            boundary,
            z_join: self.z_join,
            flagged: prev.flagged,
        };
        it.pole_locations = S::poles(&it.path);
        Ok(it)
    }

    /// Runs the iteration from `guess` until the sup-norm change drops
    /// below `stop_tol` or `p_max` steps are done.
    pub fn run<S: QlmScalar>(
        &mut self,
        guess: Iterate<S>,
        p_max: usize,
        stop_tol: Real,
    ) -> Result<(Vec<Iterate<S>>, ConvergenceReport), QlmError> {
        let mut its = vec![guess];
        let mut norms: Vec<Real> = Vec::new();
        let window = self.norm_window();
        for _ in 0..p_max {
            let next = self.qlm_step(its.last().expect("nonempty"))?;
            let d = sup_norm_diff(&next, its.last().expect("nonempty"), self.exclusion(), window)?;
            norms.push(d);
            its.push(next);
            let k = norms.len();
            if k >= 3 && norms[k - 1] > norms[k - 2] && norms[k - 2] > norms[k - 3] {
                return Err(QlmError::Diverged(norms.iter().map(|v| v.to_f64()).collect()));
            }
            if d <= stop_tol {
                break;
            }
        }
        let report = ConvergenceReport::from_norms(norms, self.tol);
        Ok((its, report))
    }

    /// Range over which iterates are compared. Near the origin `y` grows
    /// like `1/z`, which would swamp the comparison.
    pub fn norm_window(&self) -> (Real, Real) {
        let lo = match self.model.domain {
            Domain::HalfLine => (self.a * 0.1).max(self.z_left),
            Domain::FullLine => self.z_left,
        };
        (lo, self.z0)
    }

    fn exclusion(&self) -> Real {
        (self.b - self.a) * 0.02
    }

    /// Prüfer-angle mismatch `sin(θ_R − θ_L)` of the two pieces of `it` at
    /// the join point, with `tan θ = χ'/(s χ)` and the sign of `χ` carried
    /// through the chart switches. Zero exactly when the pieces match.
    pub fn mismatch(&self, it: &Iterate<Real>) -> Result<Real, QlmError> {
        let zj = it.z_join;
        let s = self.pole_scale(zj, self.k2_value(zj)?);
        let (left, right) = piece_ends(it);
        let (Some(l), Some(r)) = (left, right) else {
            return Err(QlmError::SpanMismatch);
        };
        let unit = |e: PieceEnd| -> (Real, Real) {
            // direction of (χ, χ'/s)
            let (c, d) = match e.chart {
                Chart::Direct => (e.sign, e.sign * e.value / s),
                Chart::Inverse => (e.sign * e.value * s, e.sign),
            };
            let r = (c.sqr() + d.sqr()).sqrt();
            (c / r, d / r)
        };
        let (cl, sl) = unit(l);
        let (cr, sr) = unit(r);
        Ok(cl * sr - sl * cr)
    }
}

/// State of one piece at its far end: stored value, chart, and the sign of
/// `χ` (direct) or `χ'` (inverse) as ±1.
#[derive(Clone, Copy, Debug)]
struct PieceEnd {
    chart: Chart,
    value: Real,
    sign: Real,
}

// Walks `segs` in integration order starting from χ > 0 and returns the
// end state. Signs flip only at chart switches.
fn walk_signs<'a>(segs: impl Iterator<Item = &'a Segment<Real>>, leftward: bool) -> Option<PieceEnd> {
    let mut sign = Real::ONE;
    let mut chart = Chart::Direct;
    let mut last: Option<Real> = None;
    for s in segs {
        if s.chart != chart {
            sign *= last?.signum();
            chart = s.chart;
        }
        let end = if leftward { s.lo } else { s.hi };
        last = Some(eval_series(&s.coeffs[0], end - s.anchor));
    }
    last.map(|value| PieceEnd { chart, value, sign })
}

fn piece_ends(it: &Iterate<Real>) -> (Option<PieceEnd>, Option<PieceEnd>) {
    let zj = it.z_join;
    let segs = &it.path.segments;
    let left = walk_signs(segs.iter().filter(|s| s.hi <= zj), false);
    let right = walk_signs(segs.iter().rev().filter(|s| s.lo >= zj), true);
    (left, right)
}
fn flip(c: Chart) -> Chart {
    match c {
        Chart::Direct => Chart::Inverse,
        Chart::Inverse => Chart::Direct,
    }
}

// Previous iterate's coefficients about `cell.hi`, in the cell's chart.

// Previous iterate's coefficients about `cell.anchor`, in the cell's chart.
fn prev_coeffs<S: Scalar>(prev: &Iterate<S>, cell: &Cell, m: usize) -> Vec<S> {
    let mid = (cell.lo + cell.hi) * 0.5;
    let i = prev.path.locate(mid).expect("cell inside span");
    let seg = &prev.path.segments[i];
    let mut c = if seg.anchor == cell.anchor {
        seg.coeffs[0].clone()
    } else {
        shift_series(&seg.coeffs[0], cell.anchor - seg.anchor)
    };
    c.resize(m + 1, S::zero());
    if seg.chart != cell.chart {
        let mut one = vec![S::zero(); m + 1];
        one[0] = S::one();
        c = div_series(&one, &c, m);
    }
    c
}

// (n+1) c_{n+1} = [P²]_n − 2 [c P]_n − K_n
fn direct_coeffs<S: Scalar>(p: &[S], k: &[S], x0: S, m: usize) -> Vec<S> {
    let pp = mul_series(p, p, m);
    let mut c = Vec::with_capacity(m + 1);
    c.push(x0);
    for n in 0..m {
        let mut cp = S::zero();
        for j in 0..=n {
            cp += c[j] * p[n - j];
        }
        let v = pp[n] - cp.scale(Real::TWO) - k[n];
        c.push(v.scale(Real::ONE / ((n + 1) as f64)));
    }
    c
}

// (n+1) d_{n+1} = δ_{n0} + 2 [A d]_n − B_n with A = K Q, B = K Q²
fn inverse_coeffs<S: Scalar>(q: &[S], k: &[S], x0: S, m: usize) -> Vec<S> {
    let a = mul_series(k, q, m);
    let b = mul_series(&a, q, m);
    let mut d = Vec::with_capacity(m + 1);
    d.push(x0);
    for n in 0..m {
        let mut ad = S::zero();
        for j in 0..=n {
            ad += a[j] * d[n - j];
        }
        let mut v = ad.scale(Real::TWO) - b[n];
        if n == 0 {
            v += S::one();
        }
        d.push(v.scale(Real::ONE / ((n + 1) as f64)));
    }
    d
}

fn tail_ok<S: Scalar>(c: &[S], h: Real, tol: Real) -> bool {
    let m = c.len() - 1;
    let hf = h.to_f64().abs();
    let scale = 1.0 + c[0].norm().to_f64();
    let mut worst = 0.0f64;
    for j in [m - 1, m] {
        let v = c[j].norm().to_f64();
        if !v.is_finite() {
            return false;
        }
        worst = worst.max(v * hf.powi(j as i32));
    }
    worst <= tol.to_f64() * scale
}

/// Pole locations of a real iterate: zero crossings of `w` in
/// inverse-chart segments.
pub fn find_poles(path: &DensePath<Real>) -> Vec<Real> {
    let mut out = Vec::new();
    for s in path.segments.iter().filter(|s| s.chart == Chart::Inverse) {
        let c = &s.coeffs[0];
        let f = |z: Real| eval_series(c, z - s.anchor);
        let samples = 16;
        let mut z_prev = s.lo;
        let mut f_prev = f(z_prev);
        for i in 1..=samples {
            let z = if i == samples { s.hi } else { s.lo + (s.hi - s.lo) * (i as f64 / samples as f64) };
            let v = f(z);
            if v.is_sign_negative() != f_prev.is_sign_negative() && !v.is_zero() {
                let r = crate::numkernel::root_find(f, z_prev, z, path.tol * (Real::ONE + z.abs()));
                out.push(r.map(|r| r.x).unwrap_or(z));
            }
            z_prev = z;
            f_prev = v;
        }
    }
    // A crossing exactly at a segment boundary is seen from both sides.
    out.dedup_by(|a, b| (*a - *b).abs() <= Real::pow10(-30) * (Real::ONE + a.abs()));
    out
}

impl<S: Scalar> Iterate<S> {
    /// `y` at `z` converted out of the inverse chart (`None` on a pole).
    pub fn y(&self, z: Real) -> Option<S> {
        let i = self.path.locate(z).ok()?;
        let s = &self.path.segments[i];
        let v = s.eval(0, z);
        match s.chart {
            Chart::Direct => Some(v),
            Chart::Inverse => {
                if v.is_zero() {
                    None
                } else {
                    Some(S::one() / v)
                }
            }
        }
    }

    pub fn chart_at(&self, z: Real) -> Option<Chart> {
        let i = self.path.locate(z).ok()?;
        Some(self.path.segments[i].chart)
    }

    pub fn span(&self) -> (Real, Real) {
        self.path.span()
    }
}

/// `max |yA − yB|` over a dense sample of `window`, skipping points where
/// either iterate is in the inverse chart or within `exclusion` of a pole.
pub fn sup_norm_diff<S: Scalar>(
    a: &Iterate<S>,
    b: &Iterate<S>,
    exclusion: Real,
    window: (Real, Real),
) -> Result<Real, QlmError> {
    let (la, ha) = a.span();
    let (lb, hb) = b.span();
    if la != lb || ha != hb {
        return Err(QlmError::SpanMismatch);
    }
    let poles: Vec<Real> = a.pole_locations.iter().chain(&b.pole_locations).copied().collect();
    let fine = if a.path.segments.len() >= b.path.segments.len() { a } else { b };
    let mut worst = Real::ZERO;
    let samples = 6;
    for s in &fine.path.segments {
        if s.hi < window.0 || s.lo > window.1 {
            continue;
        }
        for i in 0..=samples {
            let z = s.lo + (s.hi - s.lo) * (i as f64 / samples as f64);
            if z < window.0 || z > window.1 {
                continue;
            }
            if poles.iter().any(|p| (*p - z).abs() < exclusion) {
                continue;
            }
            if a.chart_at(z) != Some(Chart::Direct) || b.chart_at(z) != Some(Chart::Direct) {
                continue;
            }
            let (Some(ya), Some(yb)) = (a.y(z), b.y(z)) else { continue };
            worst = worst.max((ya - yb).norm());
        }
    }
    Ok(worst)
}

impl ConvergenceReport {
    pub fn from_norms(norms: Vec<Real>, tol: Real) -> ConvergenceReport {
        let ratios = norms
            .windows(2)
            .map(|w| if w[0].is_zero() { Real::ZERO } else { w[1] / w[0].sqr() })
            .collect();
        // Fit only above the noise floor of the integrator.
        let floor = tol.to_f64() * 1e4;
        let pts: Vec<(f64, f64)> = norms
            .windows(2)
            .skip(1)
            .filter(|w| w[0].to_f64() > floor && w[1].to_f64() > floor)
            .map(|w| (w[0].to_f64().ln(), w[1].to_f64().ln()))
            .collect();
        let exponent = fit_slope(&pts);
        let quadratic = exponent.is_some_and(|q| q >= 1.8);
        ConvergenceReport { norms, ratios, exponent, quadratic }
    }
}

fn fit_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Normalization of a reconstructed wave function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    PeakOne,
    UnitL2,
}


#[derive(Clone, Debug)]
struct ChiPiece {
    lo: Real,
    hi: Real,
    anchor: Real,
    chart: Chart,
    /// Values stored in the segment (`y` or `w`) about `anchor`.
    x: Vec<Real>,
    /// Series of `ln|χ|` (direct) or `ln|χ'|` (inverse) about `anchor`.
    log: Vec<Real>,
    /// Sign of `χ` (direct) or `χ'` (inverse).
    sign: Real,
}

/// `χ(z) = exp(∫ y)` rebuilt from a real iterate, chart by chart.
#[derive(Clone, Debug)]
pub struct Wavefunction {
    pieces: Vec<ChiPiece>,
    /// Subtracted from the stored logarithms.
    pub ln_norm: Real,
}

// ln|χ| tracking along one integration piece, starting from χ = 1.
fn track<'a>(
    segs: impl Iterator<Item = &'a Segment<Real>>,
    problem: &Problem,
    leftward: bool,
) -> Result<Vec<ChiPiece>, QlmError> {
    let mut out = Vec::new();
    let mut ln = Real::ZERO;
    let mut sign = Real::ONE;
    let mut chart = Chart::Direct;
    let mut last_x = Real::ONE;
    for s in segs {
        if s.chart != chart {
            // y = χ'/χ and w = χ/χ' at the switch point
            ln += last_x.abs().ln();
            sign *= last_x.signum();
            chart = s.chart;
        }
        let x = s.coeffs[0].clone();
        let rate: Vec<Real> = match s.chart {
            Chart::Direct => x.clone(),
            Chart::Inverse => {
                let k2 = problem.model.k2_jet_z(problem.e, s.anchor, x.len() - 1, KForm::Plain)?;
                mul_series(&k2, &x, x.len() - 1).into_iter().map(|c| -c).collect()
            }
        };
        let mut log = Vec::with_capacity(rate.len() + 1);
        log.push(ln);
        for (n, c) in rate.iter().enumerate() {
            log.push(*c / ((n + 1) as f64));
        }
        let end = if leftward { s.lo } else { s.hi };
        ln = eval_series(&log, end - s.anchor);
        last_x = eval_series(&x, end - s.anchor);
        out.push(ChiPiece { lo: s.lo, hi: s.hi, anchor: s.anchor, chart: s.chart, x, log, sign });
    }
    Ok(out)
}

/// Rebuilds `χ` from an iterate. Inside inverse-chart segments `ln|χ'|` is
/// tracked through `(ln|χ'|)' = −k² w`, so nodes are crossed smoothly. The
/// left piece is scaled to meet the right piece at the join point.
pub fn reconstruct_chi(it: &Iterate<Real>, problem: &Problem, norm: Normalization) -> Result<Wavefunction, QlmError> {
    let zj = it.z_join;
    let segs = &it.path.segments;
    let right = track(segs.iter().rev().filter(|s| s.lo >= zj), problem, true)?;
    let mut left = track(segs.iter().filter(|s| s.hi <= zj), problem, false)?;
    let mut pieces = right;
    pieces.reverse();
    if !left.is_empty() {
        let probe_r = Wavefunction { pieces: pieces.clone(), ln_norm: Real::ZERO };
        let probe_l = Wavefunction { pieces: left.clone(), ln_norm: Real::ZERO };
        let shift = probe_r.ln_abs(zj) - probe_l.ln_abs(zj);
        let flip = probe_r.eval(zj).signum() * probe_l.eval(zj).signum();
        for p in left.iter_mut() {
            p.log[0] += shift;
            p.sign *= flip;
        }
        pieces.append(&mut left);
    }
    pieces.sort_by(|p, q| p.lo.partial_cmp(&q.lo).expect("finite"));
    let mut wf = Wavefunction { pieces, ln_norm: Real::ZERO };
    let (lo, hi) = it.span();
    match norm {
        Normalization::PeakOne => {
            let samples = 2000;
            let mut best = -Real::INFINITY;
            let mut best_z = lo;
            for i in 0..=samples {
                let z = lo + (hi - lo) * (i as f64 / samples as f64);
                let v = wf.ln_abs(z);
                if v > best {
                    best = v;
                    best_z = z;
                }
            }
            let step = (hi - lo) / samples as f64;
            let mut zl = (best_z - step).max(lo);
            let mut zr = (best_z + step).min(hi);
            let gr = 0.381_966_011_250_105_1;
            for _ in 0..120 {
                let m1 = zl + (zr - zl) * gr;
                let m2 = zr - (zr - zl) * gr;
                if wf.ln_abs(m1) > wf.ln_abs(m2) {
                    zr = m2;
                } else {
                    zl = m1;
                }
            }
            wf.ln_norm = wf.ln_abs((zl + zr) * 0.5).max(best);
        }
        Normalization::UnitL2 => {
            let tol = problem.tol.max(Real::pow10(-40));
            // Provisional scale keeps the squares in range.
            wf.ln_norm = wf.ln_abs((lo + hi) * 0.5);
            let mut total = Real::ZERO;
            for p in &wf.pieces {
                let v: Real = quad_with(|z: Real| wf.eval(z).sqr(), p.lo, p.hi, tol, Endpoint::Regular, Endpoint::Regular)?;
                total += v;
            }
            wf.ln_norm += total.ln() * 0.5;
        }
    }
    Ok(wf)
}

impl Wavefunction {
    fn piece(&self, z: Real) -> Option<&ChiPiece> {
        let i = self.pieces.partition_point(|p| p.hi < z);
        self.pieces.get(i).filter(|p| p.lo <= z && z <= p.hi)
    }

    // ln|χ(z)| before normalization.
    fn ln_abs(&self, z: Real) -> Real {
        match self.piece(z) {
            None => Real::NAN,
            Some(p) => {
                let h = z - p.anchor;
                let l = eval_series(&p.log, h);
                match p.chart {
                    Chart::Direct => l,
                    Chart::Inverse => l + eval_series(&p.x, h).abs().ln(),
                }
            }
        }
    }

    /// `(χ, χ')` at `z`.
    pub fn eval_pair(&self, z: Real) -> Option<(Real, Real)> {
        let (l, c, d) = self.log_pair(z)?;
        let mag = l.exp();
        Some((c * mag, d * mag))
    }

    pub fn eval(&self, z: Real) -> Real {
        self.eval_pair(z).map_or(Real::NAN, |v| v.0)
    }

    pub fn derivative(&self, z: Real) -> Real {
        self.eval_pair(z).map_or(Real::NAN, |v| v.1)
    }

    /// `(ln scale, χ/scale, χ'/scale)` at `z`, safe from overflow.
    pub fn log_pair(&self, z: Real) -> Option<(Real, Real, Real)> {
        let p = self.piece(z)?;
        let h = z - p.anchor;
        let l = eval_series(&p.log, h) - self.ln_norm;
        let x = eval_series(&p.x, h);
        Some(match p.chart {
            Chart::Direct => (l, p.sign, p.sign * x),
            Chart::Inverse => (l, p.sign * x, p.sign),
        })
    }

    pub fn span(&self) -> (Real, Real) {
        (self.pieces.first().map_or(Real::ZERO, |p| p.lo), self.pieces.last().map_or(Real::ZERO, |p| p.hi))
    }
}


/// Closed-form first iterate from the `ik` guess,
/// `y₁(z) = ik(z) − i ∫_{z0}^{z} k'(s) exp[−2i ∫_s^z k(t) dt] ds`,
/// evaluated by nested quadrature split at the turning points.
pub fn first_iterate_closed(problem: &Problem, z: Real, tol: Real) -> Result<Complex, QlmError> {
    let model = &problem.model;
    let e = problem.e;
    let k = |t: Real| -> Complex {
        let k2 = model.k2_at_z(e, t, KForm::Plain).unwrap_or(Real::NAN);
        Complex::new(k2, Real::ZERO).sqrt()
    };
    let kprime = |t: Real| -> Complex {
        let j = model.k2_jet_z(e, t, 1, KForm::Plain).unwrap_or_else(|_| vec![Real::NAN; 2]);
        let kk = Complex::new(j[0], Real::ZERO).sqrt();
        Complex::new(j[1], Real::ZERO) / (kk * Real::TWO)
    };
    let (a_p, b_p) = model.turning_points(e, KForm::Plain)?;
    let tps: Vec<Real> = [a_p, b_p].into_iter().filter(|t| !t.is_zero()).collect();
    // Breakpoints of [lo, hi] at the turning points, with declared
    // square-root behaviour there.
    let pieces = |lo: Real, hi: Real| -> Vec<(Real, Real, Endpoint, Endpoint)> {
        let mut pts = vec![lo];
        for t in &tps {
            if *t > lo && *t < hi {
                pts.push(*t);
            }
        }
        pts.push(hi);
        pts.windows(2)
            .map(|w| {
                let el = if tps.contains(&w[0]) { Endpoint::Singular(0.5) } else { Endpoint::Regular };
                let er = if tps.contains(&w[1]) { Endpoint::Singular(0.5) } else { Endpoint::Regular };
                (w[0], w[1], el, er)
            })
            .collect()
    };
    let int_k = |lo: Real, hi: Real| -> Result<Complex, QlmError> {
        let (l, h, flip) = if lo <= hi { (lo, hi, false) } else { (hi, lo, true) };
        let mut acc = Complex::ZERO;
        for (x0, x1, el, er) in pieces(l, h) {
            acc += quad_with(k, x0, x1, tol * 1e-3, el, er)?;
        }
        Ok(if flip { -acc } else { acc })
    };
    let mut err: Option<QlmError> = None;
    let (lo, hi) = if z <= problem.z0 { (z, problem.z0) } else { (problem.z0, z) };
    let mut total = Complex::ZERO;
    for (x0, x1, el, er) in pieces(lo, hi) {
        // k' ~ (s − tp)^{−1/2} at turning points.
        let el = if matches!(el, Endpoint::Singular(_)) { Endpoint::Singular(-0.5) } else { el };
        let er = if matches!(er, Endpoint::Singular(_)) { Endpoint::Singular(-0.5) } else { er };
        let f = |s: Real| -> Complex {
            match int_k(s, z) {
                Ok(phase) => kprime(s) * (phase * Complex::new(Real::ZERO, -Real::TWO)).exp(),
                Err(e) => {
                    err.get_or_insert(e);
                    Complex::ZERO
                }
            }
        };
        total += quad_with(f, x0, x1, tol, el, er)?;
    }
    if let Some(e) = err {
        return Err(e);
    }
    // ∫_{z0}^{z} = −∫_{z}^{z0}
    let integral = if z <= problem.z0 { -total } else { total };
    Ok(k(z).mul_i() - integral.mul_i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::ModelId;

    #[test]
    fn direct_recursion_fixed_point() {
        // Constant k² = −c² with y = −c is an exact solution and a fixed point.
        let m = 20;
        let c = real(1.5);
        let mut k = vec![Real::ZERO; m + 1];
        k[0] = -c.sqr();
        let mut p = vec![Real::ZERO; m + 1];
        p[0] = -c;
        let out = direct_coeffs(&p, &k, -c, m);
        assert_eq!(out[0], -c);
        assert!(out[1..].iter().all(|v| v.abs() < Real::pow10(-60)));
        // Same for the inverse chart: w = −1/c.
        let mut q = vec![Real::ZERO; m + 1];
        q[0] = -c.recip();
        let out = inverse_coeffs(&q, &k, -c.recip(), m);
        assert!(out[1..].iter().all(|v| v.abs() < Real::pow10(-60)));
    }

    #[test]
    fn harmonic_ground_state_is_fixed() {
        // For V = z², E = 1 the exact log-derivative is y = −z.
        let model = PotentialModel::new(ModelId::Harmonic);
        let mut pb = Problem::new(&model, Real::ONE, 0, 34).unwrap();
        let g = pb.langer_guess().unwrap();
        let mut exact = g.clone();
        for s in exact.path.segments.iter_mut() {
            let mut c = vec![Real::ZERO; pb.order + 1];
            c[0] = -s.anchor;
            c[1] = -Real::ONE;
            s.coeffs[0] = c;
            s.chart = Chart::Direct;
        }
        let mut cells_direct = pb.clone();
        for c in cells_direct.cells.iter_mut() {
            c.chart = Chart::Direct;
        }
        // The boundary value ik(z0) = −√(z0² − 1) differs from −z0 at the
        // level of the tail tolerance only.
        let next = cells_direct.qlm_step(&exact).unwrap();
        let (lo, hi) = (Real::from_f64(-2.0), Real::from_f64(2.0));
        let d = sup_norm_diff(&next, &exact, Real::ZERO, (lo, hi)).unwrap();
        assert!(d < Real::pow10(-30), "{d}");
    }

    #[test]
    fn boundary_is_exact() {
        let model = PotentialModel::new(ModelId::Quartic);
        let e = Real::from_f64(2.39);
        let mut pb = Problem::new(&model, e, 0, 30).unwrap();
        let g = pb.langer_guess().unwrap();
        let it = pb.qlm_step(&g).unwrap();
        let want = -(-model.k2_at_z(e, pb.z0, KForm::Plain).unwrap()).sqrt();
        assert_eq!(it.y(pb.z0).unwrap(), want);
        assert_eq!(it.boundary, want);
    }

    #[test]
    fn quartic_iterates_converge_quadratically() {
        let model = PotentialModel::new(ModelId::Quartic);
        let e: Real = "2.3936440164823031156".parse().unwrap();
        let mut pb = Problem::new(&model, e, 0, 34).unwrap();
        let g = pb.langer_guess().unwrap();
        let (its, rep) = pb.run(g, 6, Real::pow10(-40)).unwrap();
        assert_eq!(its.len(), 7);
        for w in rep.norms.windows(2) {
            assert!(w[1] < w[0] || w[1] < Real::pow10(-28));
        }
        assert!(rep.quadratic, "{:?}", rep.norms.iter().map(|v| v.to_f64()).collect::<Vec<_>>());
    }

    #[test]
    fn chi_of_harmonic_is_gaussian() {
        let model = PotentialModel::new(ModelId::Harmonic);
        let mut pb = Problem::new(&model, Real::ONE, 0, 34).unwrap();
        let g = pb.langer_guess().unwrap();
        let (its, _) = pb.run(g, 8, Real::pow10(-30)).unwrap();
        let wf = reconstruct_chi(its.last().unwrap(), &pb, Normalization::PeakOne).unwrap();
        for z in [-2.0, -0.5, 0.0, 1.3, 3.0] {
            let z = real(z);
            let want = (-(z.sqr()) * 0.5).exp();
            let got = wf.eval(z);
            assert!((got - want).abs() < Real::pow10(-20), "{z}: {got}");
        }
    }

    #[test]
    fn node_of_first_excited_state() {
        let model = PotentialModel::new(ModelId::Harmonic);
        let mut pb = Problem::new(&model, real(3.0), 1, 30).unwrap();
        let g = pb.langer_guess().unwrap();
        let (its, _) = pb.run(g, 6, Real::pow10(-26)).unwrap();
        let last = its.last().unwrap();
        assert_eq!(last.pole_locations.len(), 1);
        assert!(last.pole_locations[0].abs() < Real::pow10(-20), "{:?}", last.pole_locations);
        let wf = reconstruct_chi(last, &pb, Normalization::PeakOne).unwrap();
        // χ = z e^{−z²/2} up to scale: one sign change through the node.
        assert!(wf.eval(real(-1.0)) * wf.eval(real(1.0)) < Real::ZERO);
    }

    #[test]
    fn constant_y_reconstructs_exponential() {
        let model = PotentialModel::new(ModelId::Harmonic);
        let mut pb = Problem::new(&model, Real::ONE, 0, 30).unwrap();
        let mut g = pb.langer_guess().unwrap();
        let c = real(0.7);
        for s in g.path.segments.iter_mut() {
            let mut v = vec![Real::ZERO; pb.order + 1];
            v[0] = -c;
            s.coeffs[0] = v;
            s.chart = Chart::Direct;
        }
        let wf = reconstruct_chi(&g, &pb, Normalization::PeakOne).unwrap();
        let (lo, _) = g.span();
        let z = real(1.0);
        let want = (-(c) * (z - lo)).exp();
        assert!((wf.eval(z) - want).abs() < Real::pow10(-25));
    }
}

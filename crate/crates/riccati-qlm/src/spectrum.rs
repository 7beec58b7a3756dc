//! Bound-state energies from the QLM iterates.
//!
//! For a trial energy the iterates are built from both ends of the span and
//! compared at the join point of the Langer guess. The mismatch is the sine
//! of the difference of the Prüfer angles of the two pieces, which vanishes
//! exactly at eigenvalues. The level is identified by counting poles of `y`.

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::roots::{try_root_find, RootError};
use crate::numkernel::{Chart, Real};
use crate::potentials::{KForm, PotentialError, PotentialModel};
use crate::qlm::{find_poles, ConvergenceReport, GuessKind, Iterate, Problem, QlmError};
use crate::wkb::{default_form, wkb_energy, wkb_energy_nu, WkbError};

pub use crate::potentials::hulthen_energy;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(transparent)]
    Qlm(#[from] QlmError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Wkb(#[from] WkbError),
    #[error("mismatch has the same sign at both ends of the bracket")]
    NoSignChange,
    #[error("root finder did not converge")]
    RootNotConverged,
    #[error("root at E = {energy} has {found} poles, expected {expected}")]
    WrongNodeCount { energy: f64, found: usize, expected: usize },
    #[error("w touches zero without crossing near z = {0}")]
    AmbiguousPole(f64),
    #[error("the {0:?} guess cannot be used for energy determination")]
    GuessUnsupported(GuessKind),
    #[error("depth p must be at least 1")]
    BadDepth,
}

impl From<RootError<SpectrumError>> for SpectrumError {
    fn from(e: RootError<SpectrumError>) -> Self {
        match e {
            RootError::NoSignChange => SpectrumError::NoSignChange,
            RootError::MaxIterations(_) => SpectrumError::RootNotConverged,
            RootError::Eval(e) => e,
        }
    }
}

/// Settings of one energy solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveConfig {
    /// Working digits `d`; tolerances are derived from it.
    pub digits: u32,
    /// Absolute root tolerance in `E`; `None` means `10^{4−d}·(1+|E|)`.
    pub root_tol: Option<Real>,
    pub guess: GuessKind,
    /// Locate roots at 34 digits first when `digits` is larger.
    pub escalate: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { digits: 34, root_tol: None, guess: GuessKind::Langer, escalate: true }
    }
}

impl SolveConfig {
    pub fn with_digits(digits: u32) -> SolveConfig {
        SolveConfig { digits, ..SolveConfig::default() }
    }
}

/// Energies and diagnostics for one bound state.
#[derive(Clone, Debug, Serialize)]
pub struct EigenResult {
    pub model: PotentialModel,
    pub n: usize,
    /// `energies[q]` is the root found with iterate `q`; entry 0 holds the
    /// Langer-WKB energy of the zeroth iterate.
    pub energies: Vec<Real>,
    /// Mismatch at each `energies[q]`.
    pub mismatches: Vec<Real>,
    pub pole_counts: Vec<usize>,
    pub digits_converged: f64,
    pub wkb_energy: Real,
    pub reference: Option<Real>,
    /// Relative error of the WKB energy and of each depth against
    /// `reference` when one is known.
    pub wkb_rel_error: Option<Real>,
    pub rel_errors: Vec<Real>,
    pub convergence: ConvergenceReport,
    pub digits: u32,
    pub evaluations: usize,
}

impl EigenResult {
    /// Energy from the deepest iterate.
    pub fn energy(&self) -> Real {
        *self.energies.last().expect("nonempty")
    }

    /// Energy of depth `q` (1-based).
    pub fn depth(&self, q: usize) -> Real {
        self.energies[q]
    }
}

/// Mismatch evaluation with the final iterate.
#[derive(Clone, Debug)]
pub struct MismatchEval {
    pub value: Real,
    pub problem: Problem,
    pub iterate: Iterate<Real>,
}

/// Builds iterates `0..=p` at energy `e` and returns the join mismatch of
/// iterate `p`.
pub fn mismatch_eval(
    model: &PotentialModel,
    e: Real,
    n: usize,
    p: usize,
    digits: u32,
) -> Result<MismatchEval, SpectrumError> {
    if p == 0 {
        return Err(SpectrumError::BadDepth);
    }
    let mut pb = Problem::new(model, e, n, digits)?;
    let mut it = pb.langer_guess()?;
    for _ in 0..p {
        it = pb.qlm_step(&it)?;
    }
    let value = pb.mismatch(&it)?;
    Ok(MismatchEval { value, problem: pb, iterate: it })
}

/// Join mismatch of iterate `p` at energy `e`.
pub fn mismatch(
    model: &PotentialModel,
    e: Real,
    p: usize,
    guess: GuessKind,
    digits: u32,
) -> Result<Real, SpectrumError> {
    if guess != GuessKind::Langer {
        return Err(SpectrumError::GuessUnsupported(guess));
    }
    Ok(mismatch_eval(model, e, 0, p, digits)?.value)
}

/// Number of simple poles of `y` on the span: zero crossings of `w` in
/// inverse-chart segments.
pub fn pole_count(it: &Iterate<Real>) -> Result<usize, SpectrumError> {
    for s in it.path.segments.iter().filter(|s| s.chart == Chart::Inverse) {
        // A double zero of w would be a touch: |w| small with w' ≈ 0.
        let c = &s.coeffs[0];
        let scale = c.iter().take(2).map(|v| v.abs()).fold(Real::ZERO, Real::max);
        let samples = 16;
        for i in 0..=samples {
            let z = s.lo + (s.hi - s.lo) * (i as f64 / samples as f64);
            let h = z - s.anchor;
            let w = crate::numkernel::jet::eval_series(c, h);
            let dw = crate::numkernel::jet::eval_series_deriv(c, h);
            if w.abs() < it.path.tol * scale && dw.abs() < it.path.tol.sqrt() * scale {
                return Err(SpectrumError::AmbiguousPole(z.to_f64()));
            }
        }
    }
    Ok(find_poles(&it.path).len())
}

fn default_root_tol(digits: u32, e: Real) -> Real {
    Real::pow10(4 - digits as i32) * (Real::ONE + e.abs())
}

// One root of the depth-q mismatch inside [lo, hi], searched in ε.
fn root_at_depth(
    model: &PotentialModel,
    n: usize,
    q: usize,
    lo: Real,
    hi: Real,
    digits: u32,
    tol: Real,
    evals: &mut usize,
) -> Result<Real, SpectrumError> {
    let (el, eh) = (model.eig_param(lo), model.eig_param(hi));
    let tol_eps = tol * ((eh - el) / (hi - lo)).abs().max(Real::pow10(-30));
    let r = try_root_find(
        |eps: Real| {
            *evals += 1;
            mismatch_eval(model, model.energy_of_eig(eps), n, q, digits).map(|m| m.value)
        },
        el.min(eh),
        el.max(eh),
        tol_eps,
    )?;
    Ok(model.energy_of_eig(r.x))
}

fn sign_of(model: &PotentialModel, e: Real, n: usize, q: usize, digits: u32) -> Result<Real, SpectrumError> {
    Ok(mismatch_eval(model, e, n, q, digits)?.value.signum())
}

/// Bracket of level `n` from Langer-WKB energies at fractional actions:
/// `[E(ν = n + ½ − w), E(ν = n + ½ + w)]`, widened until the depth-1
/// mismatch changes sign.
pub fn discover_bracket(model: &PotentialModel, n: usize, digits: u32) -> Result<(Real, Real), SpectrumError> {
    let form = default_form(model);
    let tol = Real::pow10(-20);
    let center = n as f64 + 0.5;
    let mut last_err = SpectrumError::NoSignChange;
    for w in [0.3, 0.45, 0.49, 0.7, 0.9] {
        let nu_lo = (center - w).max(0.02);
        let nu_hi = center + w;
        let lo = match wkb_energy_nu(model, Real::from_f64(nu_lo), form, tol) {
            Ok(v) => v,
            Err(e) => {
                last_err = e.into();
                continue;
            }
        };
        let hi = match wkb_energy_nu(model, Real::from_f64(nu_hi), form, tol) {
            Ok(v) => v,
            Err(_) => {
                // Beyond the last level: stay just below the threshold.
                let t = model.threshold();
                if !t.is_finite() {
                    continue;
                }
                t - (t - lo).abs() * 1e-3
            }
        };
        match (sign_of(model, lo, n, 1, digits), sign_of(model, hi, n, 1, digits)) {
            (Ok(a), Ok(b)) if a != b => return Ok((lo, hi)),
            (Err(e), _) | (_, Err(e)) => last_err = e,
            _ => {}
        }
    }
    Err(last_err)
}

/// Solves for level `n` with iterate depths `1..=p`. Each depth gets its
/// own root; depth `q` searches near the root of depth `q−1`.
pub fn solve_energy(
    model: &PotentialModel,
    n: usize,
    p: usize,
    bracket: Option<(Real, Real)>,
    cfg: &SolveConfig,
) -> Result<EigenResult, SpectrumError> {
    if p == 0 {
        return Err(SpectrumError::BadDepth);
    }
    if cfg.guess != GuessKind::Langer {
        return Err(SpectrumError::GuessUnsupported(cfg.guess));
    }
    let (blo, bhi) = match bracket {
        Some(b) => b,
        None => discover_bracket(model, n, cfg.digits.min(34))?,
    };
    let form = default_form(model);
    let wkb = wkb_energy(model, n, form, Real::pow10(-30))?;
    let mut evals = 0usize;
    let mut energies = vec![wkb];
    let stages: Vec<u32> = if cfg.escalate && cfg.digits > 34 { vec![34, cfg.digits] } else { vec![cfg.digits] };
    for q in 1..=p {
        let mut e_prev: Option<Real> = None;
        for &d in &stages {
            let tol = cfg.root_tol.unwrap_or_else(|| default_root_tol(d, blo.abs().max(bhi.abs())));
            let (lo, hi) = match e_prev {
                Some(e) => local_bracket(model, n, q, e, Real::pow10(8 - 34) * (Real::ONE + e.abs()), (blo, bhi), d)?,
                None => {
                    if q >= 3 {
                        let d1 = energies[q - 1];
                        let step = (d1 - energies[q - 2]).abs() * 4.0 + default_root_tol(d, d1) * 10.0;
                        local_bracket(model, n, q, d1, step, (blo, bhi), d)?
                    } else {
                        (blo, bhi)
                    }
                }
            };
            let e = root_at_depth(model, n, q, lo, hi, d, tol, &mut evals)?;
            e_prev = Some(e);
        }
        energies.push(e_prev.expect("at least one stage"));
    }
    let digits = *stages.last().expect("nonempty");
    // Diagnostics at each root.
    let mut mismatches = vec![Real::ZERO];
    let mut pole_counts = vec![n];
    let mut convergence = ConvergenceReport::default();
    for (q, e) in energies.iter().enumerate().skip(1) {
        let m = mismatch_eval(model, *e, n, q, digits)?;
        mismatches.push(m.value);
        pole_counts.push(pole_count(&m.iterate)?);
        if q == p {
            let mut pb = Problem::new(model, *e, n, digits)?;
            let g = pb.langer_guess()?;
            let (_, rep) = pb.run(g, p, Real::ZERO)?;
            convergence = rep;
        }
    }
    let found = *pole_counts.last().expect("nonempty");
    let e_final = *energies.last().expect("nonempty");
    if found != n {
        return Err(SpectrumError::WrongNodeCount { energy: e_final.to_f64(), found, expected: n });
    }
    let digits_converged = if p >= 2 {
        let d = (energies[p] - energies[p - 1]).abs() / e_final.abs().max(Real::pow10(-30));
        if d.is_zero() {
            digits as f64
        } else {
            (-d.to_f64().log10()).min(digits as f64)
        }
    } else {
        0.0
    };
    let reference = model.reference_energy(n)?;
    let rel = |e: Real, r: Real| ((e - r) / r).abs();
    let wkb_rel_error = reference.map(|r| rel(wkb, r));
    let rel_errors = match reference {
        Some(r) => energies.iter().skip(1).map(|e| rel(*e, r)).collect(),
        None => Vec::new(),
    };
    Ok(EigenResult {
        model: model.clone(),
        n,
        energies,
        mismatches,
        pole_counts,
        digits_converged,
        wkb_energy: wkb,
        reference,
        wkb_rel_error,
        rel_errors,
        convergence,
        digits,
        evaluations: evals,
    })
}

// Grows a bracket around `center` until the depth-q mismatch changes sign,
// staying inside `outer`.
fn local_bracket(
    model: &PotentialModel,
    n: usize,
    q: usize,
    center: Real,
    step: Real,
    outer: (Real, Real),
    digits: u32,
) -> Result<(Real, Real), SpectrumError> {
    let mut h = step;
    for _ in 0..40 {
        let lo = (center - h).max(outer.0);
        let hi = (center + h).min(outer.1);
        let a = sign_of(model, lo, n, q, digits)?;
        let b = sign_of(model, hi, n, q, digits)?;
        if a != b {
            return Ok((lo, hi));
        }
        if lo == outer.0 && hi == outer.1 {
            break;
        }
        h *= 8.0;
    }
    Err(SpectrumError::NoSignChange)
}

/// Solve plus WKB comparison, with relative errors against the reference
/// energy when the model has one.
pub fn wkb_vs_qlm_report(model: &PotentialModel, n: usize, p_max: usize, cfg: &SolveConfig) -> Result<EigenResult, SpectrumError> {
    solve_energy(model, n, p_max, None, cfg)
}

/// WKB energy in the default form for the model's domain.
pub fn wkb_level(model: &PotentialModel, n: usize) -> Result<Real, SpectrumError> {
    Ok(wkb_energy(model, n, default_form(model), Real::pow10(-30))?)
}

/// WKB energy in the plain form (no Langer shift).
pub fn wkb_level_plain(model: &PotentialModel, n: usize) -> Result<Real, SpectrumError> {
    Ok(wkb_energy(model, n, KForm::Plain, Real::pow10(-30))?)
}

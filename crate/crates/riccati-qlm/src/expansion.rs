//! Formal expansion of QLM iterates in powers of `g = 1/λ`, compared term
//! by term with the WKB series.
//!
//! A [`GSeries`] holds `Σ_m g^m c_m(r)` where every `c_m` is a jet in `r`
//! of order `N − m`. Each `g·d/dr` raises the power of `g` by one and uses
//! one derivative, so that depth is exactly enough to reach order `N`.

use serde::Serialize;
use thiserror::Error;

use crate::numkernel::{Complex, Jet, JetError, Real, Scalar};
use crate::potentials::PotentialModel;
use crate::wkb::{k2_jet_r, wkb_series, WkbError};

pub const MAX_G_ORDER: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpansionError {
    #[error(transparent)]
    Wkb(#[from] WkbError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("leading coefficient vanishes, the series has no inverse")]
    SeriesInversionFailure,
    #[error("order {0} exceeds the supported maximum")]
    JetOrderExhausted(usize),
    #[error("series are anchored or truncated differently")]
    AnchorMismatch,
}

#[derive(Clone, Debug)]
pub struct GSeries {
    pub anchor: Real,
    pub coeffs: Vec<Jet<Complex>>,
}

impl GSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn zero(anchor: Real, n: usize) -> GSeries {
        let coeffs = (0..=n).map(|m| Jet::constant(anchor, Complex::zero(), n - m)).collect();
        GSeries { anchor, coeffs }
    }

    /// Values of the coefficients at the anchor.
    pub fn values(&self) -> Vec<Complex> {
        self.coeffs.iter().map(|c| c.value()).collect()
    }

    fn add(&self, o: &GSeries) -> GSeries {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        GSeries { anchor: self.anchor, coeffs }
    }

    fn sub(&self, o: &GSeries) -> GSeries {
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        GSeries { anchor: self.anchor, coeffs }
    }

    fn mul(&self, o: &GSeries) -> GSeries {
        let n = self.order();
        let mut out = GSeries::zero(self.anchor, n);
        for m in 0..=n {
            let d = n - m;
            let mut acc = out.coeffs[m].clone();
            for j in 0..=m {
                acc = &acc + &(&self.coeffs[j].truncate(d) * &o.coeffs[m - j].truncate(d));
            }
            out.coeffs[m] = acc;
        }
        out
    }

    fn recip(&self) -> Result<GSeries, ExpansionError> {
        let n = self.order();
        if self.coeffs[0].value().is_zero() {
            return Err(ExpansionError::SeriesInversionFailure);
        }
        let b0 = self.coeffs[0].recip()?;
        let mut out = GSeries::zero(self.anchor, n);
        out.coeffs[0] = b0.clone();
        for m in 1..=n {
            let d = n - m;
            let mut acc = Jet::constant(self.anchor, Complex::zero(), d);
            for j in 1..=m {
                acc = &acc + &(&self.coeffs[j].truncate(d) * &out.coeffs[m - j].truncate(d));
            }
            out.coeffs[m] = -(&b0.truncate(d) * &acc);
        }
        Ok(out)
    }

    /// `g·d/dr`.
    fn g_derivative(&self) -> GSeries {
        let n = self.order();
        let mut out = GSeries::zero(self.anchor, n);
        for m in 1..=n {
            out.coeffs[m] = self.coeffs[m - 1].derivative();
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.coeffs.iter().all(|x| x.is_zero()))
    }
}

fn check_order(n: usize) -> Result<(), ExpansionError> {
    if n > MAX_G_ORDER {
        Err(ExpansionError::JetOrderExhausted(n))
    } else {
        Ok(())
    }
}

/// `Σ g^m Y_m` at `r0`.
pub fn wkb_g_series(model: &PotentialModel, e: Real, r0: Real, n: usize) -> Result<GSeries, ExpansionError> {
    check_order(n)?;
    let t = wkb_series(model, e, r0, n)?;
    Ok(GSeries { anchor: r0, coeffs: t.jets })
}

/// g-expansion of the `p`-th iterate started from `y_0 = ik`.
pub fn qlm_g_series(
    model: &PotentialModel,
    e: Real,
    r0: Real,
    p: usize,
    n: usize,
) -> Result<GSeries, ExpansionError> {
    check_order(n)?;
    let k2 = k2_jet_r(model, e, r0, n)?.to_complex();
    if k2.value().is_zero() {
        return Err(WkbError::TurningPointSingularity(0.0).into());
    }
    let mut k2s = GSeries::zero(r0, n);
    k2s.coeffs[0] = k2.clone();
    let mut y = GSeries::zero(r0, n);
    y.coeffs[0] = k2.sqrt()?.mul_scalar(Complex::I);
    for _ in 0..p {
        y = qlm_g_step(&y, &k2s)?;
    }
    Ok(y)
}

// y_p = Σ_n L_n, L_0 = (y² − k²)/(2y), L_n = −(g d/dr L_{n−1})/(2y).
fn qlm_g_step(prev: &GSeries, k2: &GSeries) -> Result<GSeries, ExpansionError> {
    let two_y = prev.add(prev);
    let h = two_y.recip()?;
    let mut l = prev.mul(prev).sub(k2).mul(&h);
    let mut sum = l.clone();
    let mut stalled = 0;
    while stalled < 2 {
        l = GSeries::zero(prev.anchor, prev.order()).sub(&l.g_derivative().mul(&h));
        if l.is_zero() {
            stalled += 1;
        } else {
            stalled = 0;
            sum = sum.add(&l);
        }
    }
    Ok(sum)
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub p: usize,
    pub n: usize,
    pub exact_matches: usize,
    pub per_term_reldiff: Vec<f64>,
    pub anchor: String,
    /// Coefficient `2^p` differs from WKB (absent when the series ends first).
    pub next_differs: Option<bool>,
    /// All WKB terms beyond the first vanish, so matching says nothing.
    pub degenerate: bool,
}

/// Counts leading coefficients agreeing to `rel_tol`; magnitudes below
/// `abs_floor` are compared absolutely.
pub fn match_count(
    qlm: &GSeries,
    wkb: &GSeries,
    rel_tol: Real,
    abs_floor: Real,
) -> Result<MatchReport, ExpansionError> {
    if qlm.anchor != wkb.anchor || qlm.order() != wkb.order() {
        return Err(ExpansionError::AnchorMismatch);
    }
    let diffs: Vec<Real> = qlm
        .values()
        .iter()
        .zip(wkb.values())
        .map(|(a, b)| {
            let d = (*a - b).norm();
            let s = a.norm().max(b.norm());
            if s < abs_floor {
                d
            } else {
                d / s
            }
        })
        .collect();
    let exact_matches = diffs.iter().take_while(|d| **d <= rel_tol).count();
    let degenerate = wkb.values()[1..].iter().all(|c| c.norm() < abs_floor);
    Ok(MatchReport {
        p: 0,
        n: qlm.order(),
        exact_matches,
        per_term_reldiff: diffs.iter().map(|d| d.to_f64()).collect(),
        anchor: qlm.anchor.to_string(),
        next_differs: None,
        degenerate,
    })
}

/// Tolerances used at working precision `digits`.
pub fn match_tolerances(digits: u32) -> (Real, Real) {
    (Real::pow10(6 - digits as i32), Real::pow10(-(digits as i32) / 2))
}

/// Reports for `p = 1..=p_max`, each at truncation `N = 2^p` so the first
/// non-matching term is visible.
pub fn verify_2p_law(
    model: &PotentialModel,
    e: Real,
    r0: Real,
    p_max: usize,
    digits: u32,
) -> Result<Vec<MatchReport>, ExpansionError> {
    let (rel, floor) = match_tolerances(digits);
    let mut out = Vec::new();
    for p in 1..=p_max {
        let n = 1usize << p;
        check_order(n)?;
        let q = qlm_g_series(model, e, r0, p, n)?;
        let w = wkb_g_series(model, e, r0, n)?;
        let mut rep = match_count(&q, &w, rel, floor)?;
        rep.p = p;
        rep.next_differs = rep.per_term_reldiff.get(n).map(|d| *d > rel.to_f64());
        out.push(rep);
    }
    Ok(out)
}

//! Wave-function comparison on a uniform radial grid: the Langer function
//! at the WKB energy and the first iterate at its own root, both against a
//! deep iterate at the converged energy.

use serde::Serialize;

use crate::numkernel::Real;
use crate::potentials::PotentialModel;
use crate::qlm::{reconstruct_chi, Normalization, Problem};
use crate::spectrum::SpectrumError;

#[derive(Clone, Debug, Serialize)]
pub struct Curves {
    pub r: Vec<Real>,
    pub exact: Vec<Real>,
    pub wkb: Vec<Real>,
    pub qlm1: Vec<Real>,
}

/// Energies at which the three functions are built.
#[derive(Clone, Copy, Debug)]
pub struct CurveEnergies {
    pub wkb: Real,
    pub qlm1: Real,
    pub exact: Real,
}

// Max of |f| on [lo, hi]: coarse scan then golden section.
fn peak(f: impl Fn(Real) -> Real, lo: Real, hi: Real) -> Real {
    let samples = 2000;
    let step = (hi - lo) / samples as f64;
    let (mut best, mut best_z) = (Real::ZERO, lo);
    for i in 0..=samples {
        let z = lo + step * i as f64;
        let v = f(z).abs();
        if v > best {
            best = v;
            best_z = z;
        }
    }
    let (mut a, mut b) = ((best_z - step).max(lo), (best_z + step).min(hi));
    let gr = 0.381_966_011_250_105_1;
    for _ in 0..100 {
        let m1 = a + (b - a) * gr;
        let m2 = b - (b - a) * gr;
        if f(m1).abs() > f(m2).abs() {
            b = m2;
        } else {
            a = m1;
        }
    }
    best.max(f((a + b) * 0.5).abs())
}

/// Peak-normalized curves for level `n` at `points` radii. The exact
/// proxy is iterate `p_exact` (or the first whose change drops below
/// `stop_tol`); the grid covers the exact iterate's span.
pub fn wavefunction_curves(
    model: &PotentialModel,
    n: usize,
    energies: CurveEnergies,
    p_exact: usize,
    stop_tol: Real,
    digits: u32,
    points: usize,
) -> Result<Curves, SpectrumError> {
    let mut pe = Problem::new(model, energies.exact, n, digits)?;
    let g = pe.langer_guess()?;
    let (its, _) = pe.run(g, p_exact, stop_tol)?;
    let exact = reconstruct_chi(its.last().expect("nonempty"), &pe, Normalization::PeakOne)?;

    let mut p1 = Problem::new(model, energies.qlm1, n, digits)?;
    let g = p1.langer_guess()?;
    let it1 = p1.qlm_step(&g)?;
    let qlm1 = reconstruct_chi(&it1, &p1, Normalization::PeakOne)?;

    let mut pw = Problem::new(model, energies.wkb, n, digits)?;
    pw.langer_guess()?;
    let langer = pw.langer.clone().expect("guess built");
    let langer_chi = |z: Real| langer.chi(z).map_or(Real::NAN, |v| v.0);

    let (lo, hi) = exact.span();
    let (lo, hi) = (lo.max(qlm1.span().0).max(pw.z_left), hi.min(qlm1.span().1).min(pw.z0));
    let scale = peak(&langer_chi, lo, hi);

    let mut c = Curves { r: Vec::new(), exact: Vec::new(), wkb: Vec::new(), qlm1: Vec::new() };
    let m = points.max(2);
    for i in 0..m {
        let z = lo + (hi - lo) * (i as f64 / (m - 1) as f64);
        c.r.push(model.r_of_z(z));
        c.exact.push(exact.eval(z));
        c.qlm1.push(qlm1.eval(z));
        c.wkb.push(langer_chi(z) / scale);
    }
    for v in [&mut c.wkb, &mut c.qlm1] {
        let dot = v.iter().zip(&c.exact).fold(Real::ZERO, |acc, (a, b)| acc + *a * *b);
        if dot < Real::ZERO {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(c)
}

/// Sup of `|exact − wkb|` and `|exact − qlm1|` over the radii holding the
/// central 80 % of the exact probability.
pub fn bulk_errors(c: &Curves) -> (Real, Real) {
    let m = c.r.len();
    let mut cum = vec![Real::ZERO; m];
    for i in 1..m {
        let h = c.r[i] - c.r[i - 1];
        cum[i] = cum[i - 1] + (c.exact[i].sqr() + c.exact[i - 1].sqr()) * h * 0.5;
    }
    let total = cum[m - 1];
    let (mut ew, mut eq) = (Real::ZERO, Real::ZERO);
    for i in 0..m {
        let f = cum[i] / total;
        if f >= Real::from_f64(0.1) && f <= Real::from_f64(0.9) {
            ew = ew.max((c.exact[i] - c.wkb[i]).abs());
            eq = eq.max((c.exact[i] - c.qlm1[i]).abs());
        }
    }
    (ew, eq)
}

//! Finite-difference eigenvalues used as an independent check on the
//! closed-form levels. Plain `f64`, potentials written out by hand.

#![allow(dead_code)]

/// `−ψ'' + v(r) ψ = E ψ` on `n_pts` interior points of `(lo, hi)` with
/// Dirichlet ends; lowest `count` eigenvalues of the three-point matrix.
pub fn fd_levels(v: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n_pts: usize, count: usize) -> Vec<f64> {
    let h = (hi - lo) / (n_pts + 1) as f64;
    let diag: Vec<f64> = (1..=n_pts).map(|i| 2.0 / (h * h) + v(lo + h * i as f64)).collect();
    let off = -1.0 / (h * h);
    let (gmin, gmax) = diag.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| {
        (a.min(d - 2.0 * off.abs()), b.max(d + 2.0 * off.abs()))
    });
    (0..count).map(|k| bisect_kth(&diag, off, k, gmin, gmax)).collect()
}

// Number of eigenvalues below x (Sturm sequence of the LDLᵀ pivots).
fn count_below(diag: &[f64], off: f64, x: f64) -> usize {
    let mut c = 0;
    let mut q = 1.0;
    for (i, d) in diag.iter().enumerate() {
        let b2 = if i == 0 { 0.0 } else { off * off };
        q = d - x - b2 / q;
        if q == 0.0 {
            q = 1e-300;
        }
        if q < 0.0 {
            c += 1;
        }
    }
    c
}

fn bisect_kth(diag: &[f64], off: f64, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Richardson extrapolation over grids `n` and `2n+1` (the second halves
/// the spacing), removing the `h²` error term.
pub fn fd_levels_extrapolated(v: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n_pts: usize, count: usize) -> Vec<f64> {
    let coarse = fd_levels(v, lo, hi, n_pts, count);
    let fine = fd_levels(v, lo, hi, 2 * n_pts + 1, count);
    coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect()
}

/// Oracle set-ups for the default parameters of the four models (units
/// with `2m = ħ = 1`, so the operator is `−d²/dr² + V`).
pub fn oracle_levels(model: &str) -> Vec<f64> {
    match model {
        "harmonic" => fd_levels_extrapolated(&|r| r * r, -9.0, 9.0, 4000, 3),
        "coulomb" => fd_levels_extrapolated(&|r| -1.0 / r, 0.0, 160.0, 20000, 3),
        "morse" => fd_levels_extrapolated(
            &|r| 12.0 * ((-2.0 * r).exp() - 2.0 * (-r).exp()),
            -2.5,
            30.0,
            6000,
            3,
        ),
        "poschl_teller" => fd_levels_extrapolated(&|r| -15.0 / r.cosh().powi(2), -25.0, 25.0, 6000, 3),
        other => panic!("no oracle for {other}"),
    }
}

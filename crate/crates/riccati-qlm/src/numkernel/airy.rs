//! Airy function Ai and its derivative at quad-double precision.
//!
//! Near the origin the Maclaurin series is summed directly. Far out the
//! asymptotic expansions are used once their smallest term drops below the
//! working epsilon. The gap in between (where neither branch is accurate
//! enough at 60 digits) is bridged by Taylor stepping of `Ai'' = x Ai`,
//! always in the numerically stable direction: outward from 0 on the
//! oscillatory side, inward from the asymptotic region on the decaying side.

use thiserror::Error;

use super::jet::Jet;
use super::real::{Real, QD_EPS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AiryError {
    #[error("Airy evaluation at {0} loses all significant digits")]
    PrecisionLoss(f64),
}

pub const AI0: Real = Real::from_limbs([
    0.3550280538878172,
    2.05233632436212e-17,
    -1.1009245373379416e-34,
    -2.7362481276557746e-51,
]);
pub const AIP0: Real = Real::from_limbs([
    -0.2588194037928068,
    2.522243111610832e-17,
    1.1690102804178028e-33,
    -7.812139619897335e-50,
]);

// Smallest |x| at which the asymptotic series alone reaches full precision
// (needs 2*xi >= 62 ln 10 + margin).
const X_ASYM: f64 = 23.5;
const X_SERIES: f64 = 2.0;
const STEP: f64 = 0.5;

/// `(Ai(x), Ai'(x))`.
pub fn airy(x: Real) -> Result<(Real, Real), AiryError> {
    let (a, ap, xi) = airy_scaled(x)?;
    if xi.is_zero() {
        return Ok((a, ap));
    }
    if xi.to_f64() > 700.0 {
        return Err(AiryError::PrecisionLoss(x.to_f64()));
    }
    let s = (-xi).exp();
    Ok((a * s, ap * s))
}

/// `(Ai(x) e^ξ, Ai'(x) e^ξ, ξ)` with `ξ = (2/3) x^{3/2}` for `x > 0` and
/// `ξ = 0` otherwise. Usable far beyond the underflow point of `Ai`.
pub fn airy_scaled(x: Real) -> Result<(Real, Real, Real), AiryError> {
    if !x.is_finite() {
        return Err(AiryError::PrecisionLoss(x.to_f64()));
    }
    let xf = x.to_f64();
    if xf.abs() <= X_SERIES {
        let (a, ap) = taylor_step(Real::ZERO, AI0, AIP0, x);
        return Ok((a, ap, Real::ZERO));
    }
    if xf > 0.0 {
        let xi = x * x.sqrt() * (Real::TWO / 3.0);
        if xf >= X_ASYM {
            let (a, ap) = asym_pos(x, xi);
            return Ok((a, ap, xi));
        }
        // Start where the asymptotic series is exact and step back.
        let x_a = Real::from_f64(X_ASYM);
        let xi_a = x_a * x_a.sqrt() * (Real::TWO / 3.0);
        let (a, ap) = asym_pos(x_a, xi_a);
        let s = (xi - xi_a).exp();
        let (a, ap) = march(x_a, a * s, ap * s, x);
        return Ok((a, ap, xi));
    }
    let t = -x;
    let xi = t * t.sqrt() * (Real::TWO / 3.0);
    if xi.to_f64() > 1e15 {
        return Err(AiryError::PrecisionLoss(xf));
    }
    if -xf >= X_ASYM {
        let (a, ap) = asym_neg(t, xi);
        return Ok((a, ap, Real::ZERO));
    }
    let (a, ap) = march(Real::ZERO, AI0, AIP0, x);
    Ok((a, ap, Real::ZERO))
}

/// Taylor jet of Ai about `x0`, built from the differential equation.
pub fn airy_jet(x0: Real, order: usize) -> Result<Jet<Real>, AiryError> {
    let (a, ap) = airy(x0)?;
    Ok(Jet::new(x0, airy_coeffs(x0, a, ap, order)))
}

/// Taylor coefficients of the solution of `u'' = x u` about `x0` with the
/// given value and slope.
pub fn airy_coeffs(x0: Real, a: Real, ap: Real, order: usize) -> Vec<Real> {
    let mut c = vec![Real::ZERO; order.max(2) + 1];
    c[0] = a;
    c[1] = ap;
    c[2] = x0 * a * 0.5;
    for n in 1..order.max(2) - 1 {
        c[n + 2] = (x0 * c[n] + c[n - 1]) / (((n + 1) * (n + 2)) as f64);
    }
    c.truncate(order + 1);
    c
}

// Steps from x0 to x in pieces no longer than STEP.
fn march(x0: Real, mut a: Real, mut ap: Real, x: Real) -> (Real, Real) {
    let span = x - x0;
    let n = (span.abs().to_f64() / STEP).ceil().max(1.0) as usize;
    let h = span / (n as f64);
    let mut at = x0;
    for i in 0..n {
        let next = if i + 1 == n { x } else { at + h };
        let (na, nap) = taylor_step(at, a, ap, next);
        a = na;
        ap = nap;
        at = next;
    }
    (a, ap)
}

// Sums the local Taylor series of u'' = x u from x0 to x.
fn taylor_step(x0: Real, a: Real, ap: Real, x: Real) -> (Real, Real) {
    let h = x - x0;
    if h.is_zero() {
        return (a, ap);
    }
    // c[n] h^n kept as running terms to avoid huge powers.
    let mut t_prev2 = a; // c0
    let mut t_prev1 = ap * h; // c1 h
    let mut t = x0 * a * 0.5 * h.sqr(); // c2 h^2
    let mut val = t_prev2 + t_prev1 + t;
    let mut der = ap + t * 2.0 / h;
    let scale = a.abs() + (ap * h).abs();
    let h3 = h * h * h;
    let h2 = h.sqr();
    let mut quiet = 0;
    let mut n = 1usize;
    loop {
        // c[n+2] h^{n+2} = (x0 c[n] h^n h^2 + c[n-1] h^{n-1} h^3) / ((n+1)(n+2))
        let next = (x0 * t_prev1 * h2 + t_prev2 * h3) / (((n + 1) * (n + 2)) as f64);
        val += next;
        der += next * ((n + 2) as f64) / h;
        let small = next.abs() <= (val.abs() + scale) * QD_EPS * 0.25;
        quiet = if small { quiet + 1 } else { 0 };
        t_prev2 = t_prev1;
        t_prev1 = t;
        t = next;
        n += 1;
        if quiet >= 3 || n > 400 {
            break;
        }
    }
    (val, der)
}

// Coefficients u_k of the Airy asymptotic series.
fn u_coeffs(n: usize) -> Vec<Real> {
    let mut u = Vec::with_capacity(n + 1);
    u.push(Real::ONE);
    for k in 1..=n {
        let kf = k as f64;
        let num = Real::from_f64((6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0));
        let den = Real::from_f64((2.0 * kf - 1.0) * 216.0 * kf);
        let prev = u[k - 1];
        u.push(prev * num / den);
    }
    u
}

fn v_of(u: &[Real], k: usize) -> Real {
    let kf = k as f64;
    -(u[k] * (6.0 * kf + 1.0) / (6.0 * kf - 1.0))
}

// Number of terms before the asymptotic series starts to grow.
fn asym_terms(xi: Real) -> usize {
    ((2.0 * xi.to_f64()).floor() as usize).clamp(2, 200)
}

fn asym_pos(x: Real, xi: Real) -> (Real, Real) {
    let n = asym_terms(xi);
    let u = u_coeffs(n + 1);
    let inv = xi.recip();
    let (mut su, mut sv) = (Real::ZERO, Real::ZERO);
    let mut p = Real::ONE;
    for k in 0..=n {
        let tu = u[k] * p;
        let tv = if k == 0 { Real::ONE } else { v_of(&u, k) * p };
        su += tu;
        sv += tv;
        if tu.abs() <= QD_EPS * 0.1 && k > 0 {
            break;
        }
        p = -(p * inv);
    }
    let q = x.sqrt().sqrt();
    let c = Real::SQRT_PI * 2.0;
    (su / (c * q), -(sv * q) / c)
}

fn asym_neg(t: Real, xi: Real) -> (Real, Real) {
    let n = asym_terms(xi);
    let u = u_coeffs(n + 1);
    let inv = xi.recip();
    // P, Q for Ai and R, S for Ai'.
    let (mut p, mut q, mut rr, mut ss) = (Real::ZERO, Real::ZERO, Real::ZERO, Real::ZERO);
    let mut pw = Real::ONE;
    for k in 0..=n {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let vk = if k == 0 { Real::ONE } else { v_of(&u, k) };
        let tu = u[k] * pw * sign;
        let tv = vk * pw * sign;
        if k % 2 == 0 {
            p += tu;
            rr += tv;
        } else {
            q += tu;
            ss += tv;
        }
        if tu.abs() <= QD_EPS * 0.1 && k > 1 {
            break;
        }
        pw *= inv;
    }
    let phase = xi - Real::PI * 0.25;
    let (s, c) = phase.sin_cos();
    let q4 = t.sqrt().sqrt();
    let a = (c * p + s * q) / (Real::SQRT_PI * q4);
    let ap = q4 * (s * rr - c * ss) / Real::SQRT_PI;
    (a, ap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Real {
        s.parse().unwrap()
    }

    fn rel(a: Real, b: Real) -> f64 {
        ((a - b) / b).abs().to_f64()
    }

    // Reference values from an 80-digit evaluation.
    #[test]
    fn values_against_reference() {
        let cases = [
            ("0", "0.3550280538878172392600631860041831763979791741991772405833265103", "-0.25881940379280679840518356018920396347909113835493458221000181386"),
            ("1", "0.13529241631288141552414742351546630617494414298833070600910205476", "-0.15914744129679321278750025249722968657388920151161096941519952149"),
            ("-1", "0.53556088329235211879951656563887470746693089768361700277063151721", "-0.010160567116645209395045469845357561841890395466670664105399929723"),
            ("2.5", "0.015725923380470489995266046540764168454315823217476449094800964395", "-0.026250881035903230364895496297232509446317838135770716435499325967"),
            ("-5.75", "-0.1888420989994473668025316562221517495426582896488045263499330002", "0.73916568708668444639631546002782894673677033278522831033185728078"),
            ("10", "1.1047532552898685933550205657992241068765416685222052875257151878e-10", "-3.5206336767389236366206448252793472703081473980597181134759006394e-10"),
            ("-15.5", "-0.16644795409041976738816182810959129904367094890191746433494128761", "0.90493793543021219950674257010187607628866107330505501288183278855"),
            ("20", "1.6916728686705403135535602125093513223700180925576140946102713817e-27", "-7.5863916257483549605153717059128075058170482602566610463991082663e-27"),
            ("-30", "-0.08796818845684216283262385832389778310726773685270024841152817249", "1.2286206026374851347041276108581500794555565531503091075742900337"),
            ("30", "3.208217591550495571075286933184752796566851921757606493445484049e-49", "-1.7598765814327259820821046924047368261943773726313369899372217407e-48"),
        ];
        for (x, a, ap) in cases {
            let (va, vap) = airy(p(x)).unwrap();
            assert!(rel(va, p(a)) < 1e-56, "Ai({x}) {}", rel(va, p(a)));
            assert!(rel(vap, p(ap)) < 1e-56, "Ai'({x}) {}", rel(vap, p(ap)));
        }
    }

    #[test]
    fn decreasing_on_positive_axis() {
        let mut prev = airy(Real::ONE).unwrap().0;
        for i in 1..60 {
            let x = Real::ONE + Real::from_f64(i as f64 * 0.5);
            let (a, ap) = airy(x).unwrap();
            assert!(a < prev && a > Real::ZERO);
            assert!(ap < Real::ZERO);
            prev = a;
        }
    }

    #[test]
    fn branches_agree_at_seams() {
        for x in [X_SERIES, X_ASYM, -X_SERIES, -X_ASYM] {
            let lo = Real::from_f64(x) - Real::from_f64(1e-30);
            let hi = Real::from_f64(x) + Real::from_f64(1e-30);
            let (a, _, xa) = airy_scaled(lo).unwrap();
            let (b, _, xb) = airy_scaled(hi).unwrap();
            let a = a * (xb - xa).exp();
            assert!(rel(a, b) < 1e-28, "seam at {x}");
        }
    }

    #[test]
    fn jet_satisfies_airy_equation() {
        for x in [-7.25, -0.5, 0.0, 3.0, 12.0] {
            let x0 = Real::from_f64(x);
            let j = airy_jet(x0, 4).unwrap();
            let want = x0 * j.coeffs[0] * 0.5;
            assert!((j.coeffs[2] - want).abs().to_f64() <= 1e-58 * j.coeffs[0].abs().to_f64().max(1e-300));
        }
    }
}

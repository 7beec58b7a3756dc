//! Quad-double real numbers.
//!
//! A value is the unevaluated sum of four non-overlapping `f64` limbs, which
//! gives roughly 62 significant decimal digits while staying `Copy`, pure Rust
//! and portable to wasm. The algorithms follow the classic error-free
//! transformation approach (two-sum / two-product plus renormalisation).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

/// Unit roundoff of the representation (about 1.2e-63 relative).
pub const QD_EPS: f64 = 1.215_432_671_457_254e-63;

/// Number of decimal digits the representation can carry.
pub const QD_DIGITS: u32 = 62;

#[derive(Clone, Copy, Default)]
pub struct Real([f64; 4]);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse `{0}` as a decimal number")]
pub struct ParseRealError(pub String);

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[cfg(target_feature = "fma")]
#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[cfg(not(target_feature = "fma"))]
#[inline(always)]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0;
    const THRESH: f64 = 6.696_928_794_914_17e299;
    if a.abs() > THRESH {
        let a = a * 3.725_290_298_461_914e-9;
        let t = SPLITTER * a;
        let hi = t - (t - a);
        let lo = a - hi;
        (hi * 268_435_456.0, lo * 268_435_456.0)
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[cfg(not(target_feature = "fma"))]
#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
}

#[inline(always)]
fn three_sum(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    let (b, c) = two_sum(t2, t3);
    (a, b, c)
}

#[inline(always)]
fn three_sum2(a: f64, b: f64, c: f64) -> (f64, f64) {
    let (t1, t2) = two_sum(a, b);
    let (a, t3) = two_sum(c, t1);
    (a, t2 + t3)
}

#[inline(always)]
fn renorm4(c0: f64, c1: f64, c2: f64, c3: f64) -> Real {
    if !c0.is_finite() {
        return Real([c0, 0.0, 0.0, 0.0]);
    }
    let (s0, c3) = quick_two_sum(c2, c3);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        let (a, b) = quick_two_sum(s1, c2);
        s1 = a;
        s2 = b;
        if s2 != 0.0 {
            let (a, b) = quick_two_sum(s2, c3);
            s2 = a;
            s3 = b;
        } else {
            let (a, b) = quick_two_sum(s1, c3);
            s1 = a;
            s2 = b;
        }
    } else {
        let (a, b) = quick_two_sum(s0, c2);
        s0 = a;
        s1 = b;
        if s1 != 0.0 {
            let (a, b) = quick_two_sum(s1, c3);
            s1 = a;
            s2 = b;
        } else {
            let (a, b) = quick_two_sum(s0, c3);
            s0 = a;
            s1 = b;
        }
    }
    Real([s0, s1, s2, s3])
}

#[inline(always)]
fn renorm5(c0: f64, c1: f64, c2: f64, c3: f64, c4: f64) -> Real {
    if !c0.is_finite() {
        return Real([c0, 0.0, 0.0, 0.0]);
    }
    let (s0, c4) = quick_two_sum(c3, c4);
    let (s0, c3) = quick_two_sum(c2, s0);
    let (s0, c2) = quick_two_sum(c1, s0);
    let (c0, c1) = quick_two_sum(c0, s0);
    let (mut s0, mut s1) = (c0, c1);
    let (mut s2, mut s3) = (0.0, 0.0);
    if s1 != 0.0 {
        (s1, s2) = quick_two_sum(s1, c2);
        if s2 != 0.0 {
            (s2, s3) = quick_two_sum(s2, c3);
            if s3 != 0.0 {
                s3 += c4;
            } else {
                (s2, s3) = quick_two_sum(s2, c4);
            }
        } else {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        }
    } else {
        (s0, s1) = quick_two_sum(s0, c2);
        if s1 != 0.0 {
            (s1, s2) = quick_two_sum(s1, c3);
            if s2 != 0.0 {
                (s2, s3) = quick_two_sum(s2, c4);
            } else {
                (s1, s2) = quick_two_sum(s1, c4);
            }
        } else {
            (s0, s1) = quick_two_sum(s0, c3);
            if s1 != 0.0 {
                (s1, s2) = quick_two_sum(s1, c4);
            } else {
                (s0, s1) = quick_two_sum(s0, c4);
            }
        }
    }
    Real([s0, s1, s2, s3])
}

// Returns the completed component (or 0 if none is ready) and updates the
// two running accumulators.
#[inline(always)]
fn quick_three_accum(a: &mut f64, b: &mut f64, c: f64) -> f64 {
    let (s, bb) = two_sum(*b, c);
    let (s, aa) = two_sum(*a, s);
    *a = aa;
    *b = bb;
    let za = *a != 0.0;
    let zb = *b != 0.0;
    if za && zb {
        return s;
    }
    if !zb {
        *b = *a;
        *a = s;
    } else {
        *a = s;
    }
    0.0
}

const fn r(a: f64, b: f64, c: f64, d: f64) -> Real {
    Real([a, b, c, d])
}

impl Real {
    pub const ZERO: Real = r(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Real = r(1.0, 0.0, 0.0, 0.0);
    pub const TWO: Real = r(2.0, 0.0, 0.0, 0.0);
    pub const HALF: Real = r(0.5, 0.0, 0.0, 0.0);
    pub const PI: Real = r(
        3.141592653589793,
        1.2246467991473532e-16,
        -2.9947698097183397e-33,
        1.1124542208633653e-49,
    );
    pub const LN2: Real = r(
        0.6931471805599453,
        2.3190468138462996e-17,
        5.707708438416212e-34,
        -3.5824322106018114e-50,
    );
    pub const LN10: Real = r(
        2.302585092994046,
        -2.1707562233822494e-16,
        -9.984262454465777e-33,
        -4.023357454450206e-49,
    );
    pub const E: Real = r(
        2.718281828459045,
        1.4456468917292502e-16,
        -2.1277171080381768e-33,
        1.5156301598412191e-49,
    );
    pub const SQRT_PI: Real = r(
        1.772453850905516,
        -7.666586499825799e-17,
        -1.3058334907945429e-33,
        -2.6110142087827155e-50,
    );
    pub const NAN: Real = r(f64::NAN, 0.0, 0.0, 0.0);
    pub const INFINITY: Real = r(f64::INFINITY, 0.0, 0.0, 0.0);

    #[inline]
    pub const fn from_f64(x: f64) -> Real {
        Real([x, 0.0, 0.0, 0.0])
    }

    /// Builds a value from limbs that are already normalised.
    pub const fn from_limbs(l: [f64; 4]) -> Real {
        Real(l)
    }

    /// Exact conversion for any `i64`.
    pub fn from_i64(n: i64) -> Real {
        let hi = (n >> 32) as f64 * 4_294_967_296.0;
        let lo = (n & 0xffff_ffff) as f64;
        Real::from_f64(hi) + lo
    }

    #[inline]
    pub fn limbs(self) -> [f64; 4] {
        self.0
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0[0] + self.0[1]
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0[0] == 0.0
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0[0].is_finite()
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.0[0].is_nan()
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.0[0] < 0.0
    }

    #[inline]
    pub fn abs(self) -> Real {
        if self.0[0] < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn signum(self) -> Real {
        if self.0[0] > 0.0 {
            Real::ONE
        } else if self.0[0] < 0.0 {
            -Real::ONE
        } else {
            Real::ZERO
        }
    }

    pub fn max(self, other: Real) -> Real {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn min(self, other: Real) -> Real {
        if self <= other {
            self
        } else {
            other
        }
    }

    /// Multiplication by an exact power of two.
    #[inline]
    pub fn ldexp(self, e: i32) -> Real {
        let f = 2f64.powi(e);
        Real([self.0[0] * f, self.0[1] * f, self.0[2] * f, self.0[3] * f])
    }

    #[inline]
    fn mul_pow2(self, f: f64) -> Real {
        Real([self.0[0] * f, self.0[1] * f, self.0[2] * f, self.0[3] * f])
    }

    pub fn floor(self) -> Real {
        let x0 = self.0[0].floor();
        let (mut x1, mut x2, mut x3) = (0.0, 0.0, 0.0);
        if x0 == self.0[0] {
            x1 = self.0[1].floor();
            if x1 == self.0[1] {
                x2 = self.0[2].floor();
                if x2 == self.0[2] {
                    x3 = self.0[3].floor();
                }
            }
            return renorm4(x0, x1, x2, x3);
        }
        Real([x0, x1, x2, x3])
    }

    pub fn round(self) -> Real {
        (self + Real::HALF).floor()
    }

    fn add_f64(self, b: f64) -> Real {
        let (c0, e) = two_sum(self.0[0], b);
        let (c1, e) = two_sum(self.0[1], e);
        let (c2, e) = two_sum(self.0[2], e);
        let (c3, e) = two_sum(self.0[3], e);
        renorm5(c0, c1, c2, c3, e)
    }

    fn mul_f64(self, b: f64) -> Real {
        let (p0, q0) = two_prod(self.0[0], b);
        let (p1, q1) = two_prod(self.0[1], b);
        let (p2, q2) = two_prod(self.0[2], b);
        let p3 = self.0[3] * b;
        let s0 = p0;
        let (s1, s2) = two_sum(q0, p1);
        let (s2, q1, p2) = three_sum(s2, q1, p2);
        let (q1, q2) = three_sum2(q1, q2, p3);
        let s3 = q1;
        let s4 = q2 + p2;
        renorm5(s0, s1, s2, s3, s4)
    }

    fn div_f64(self, b: f64) -> Real {
        let q0 = self.0[0] / b;
        let rem = self - Real::from_f64(b).mul_f64(q0);
        let q1 = rem.0[0] / b;
        let rem = rem - Real::from_f64(b).mul_f64(q1);
        let q2 = rem.0[0] / b;
        let rem = rem - Real::from_f64(b).mul_f64(q2);
        let q3 = rem.0[0] / b;
        let rem = rem - Real::from_f64(b).mul_f64(q3);
        let q4 = rem.0[0] / b;
        renorm5(q0, q1, q2, q3, q4)
    }

    #[inline]
    pub fn sqr(self) -> Real {
        self * self
    }

    pub fn recip(self) -> Real {
        Real::ONE / self
    }

    pub fn sqrt(self) -> Real {
        if self.is_zero() {
            return Real::ZERO;
        }
        if self.0[0] < 0.0 {
            return Real::NAN;
        }
        let mut x = Real::from_f64(1.0 / self.0[0].sqrt());
        let h = self.mul_pow2(0.5);
        for _ in 0..3 {
            x += (Real::HALF - h * x.sqr()) * x;
        }
        x * self
    }

    pub fn powi(self, n: i32) -> Real {
        if n == 0 {
            return Real::ONE;
        }
        let mut base = self;
        let mut e = n.unsigned_abs();
        let mut acc = Real::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            acc
        }
    }

    pub fn exp(self) -> Real {
        const K: f64 = 65536.0;
        if self.0[0] <= -709.0 {
            return Real::ZERO;
        }
        if self.0[0] >= 709.0 {
            return Real::INFINITY;
        }
        if self.is_zero() {
            return Real::ONE;
        }
        let m = (self.0[0] / Real::LN2.0[0] + 0.5).floor();
        let rr = (self - Real::LN2.mul_f64(m)).mul_pow2(1.0 / K);
        let thresh = QD_EPS / K;
        let p0 = rr.sqr();
        let mut s = rr + p0.mul_pow2(0.5);
        let mut p = p0;
        let mut fact = 2.0;
        for i in 3..40 {
            p *= rr;
            fact *= i as f64;
            let t = p.div_f64(fact);
            s += t;
            if t.0[0].abs() <= thresh {
                break;
            }
        }
        for _ in 0..16 {
            s = s.mul_pow2(2.0) + s.sqr();
        }
        (s + 1.0).ldexp(m as i32)
    }

    /// `exp(x) - 1` without cancellation for small `x`.
    pub fn exp_m1(self) -> Real {
        if self.0[0].abs() > 0.5 {
            return self.exp() - 1.0;
        }
        let mut term = self;
        let mut sum = self;
        for i in 2..80 {
            term = (term * self).div_f64(i as f64);
            sum += term;
            if term.0[0].abs() <= QD_EPS * sum.0[0].abs() {
                break;
            }
        }
        sum
    }

    pub fn ln(self) -> Real {
        if self.0[0] <= 0.0 {
            return if self.is_zero() {
                -Real::INFINITY
            } else {
                Real::NAN
            };
        }
        if self == Real::ONE {
            return Real::ZERO;
        }
        let mut x = Real::from_f64(self.0[0].ln());
        for _ in 0..3 {
            x = x + self * (-x).exp() - 1.0;
        }
        x
    }

    pub fn log10(self) -> Real {
        self.ln() / Real::LN10
    }

    pub fn powf(self, e: Real) -> Real {
        if self.is_zero() {
            return if e.0[0] > 0.0 {
                Real::ZERO
            } else {
                Real::INFINITY
            };
        }
        (e * self.ln()).exp()
    }

    /// Real cube root, defined for negative arguments.
    pub fn cbrt(self) -> Real {
        if self.is_zero() {
            return Real::ZERO;
        }
        let a = self.abs();
        let mut x = Real::from_f64(a.0[0].cbrt());
        for _ in 0..3 {
            x -= (x * x * x - a) / (x.sqr() * 3.0);
        }
        if self.0[0] < 0.0 {
            -x
        } else {
            x
        }
    }

    // Taylor series for |x| <= pi/4.
    fn sin_taylor(x: Real) -> Real {
        let x2 = x.sqr();
        let mut term = x;
        let mut sum = x;
        let mut k = 1.0;
        loop {
            term = -(term * x2).div_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            sum += term;
            if term.0[0].abs() <= QD_EPS * 0.5 * sum.0[0].abs() || k > 80.0 {
                break;
            }
        }
        sum
    }

    fn cos_taylor(x: Real) -> Real {
        let x2 = x.sqr();
        let mut term = Real::ONE;
        let mut sum = Real::ONE;
        let mut k = 0.0;
        loop {
            term = -(term * x2).div_f64((k + 1.0) * (k + 2.0));
            k += 2.0;
            sum += term;
            if term.0[0].abs() <= QD_EPS * 0.5 || k > 80.0 {
                break;
            }
        }
        sum
    }

    pub fn sin_cos(self) -> (Real, Real) {
        if self.is_zero() {
            return (Real::ZERO, Real::ONE);
        }
        let two_pi = Real::PI.mul_pow2(2.0);
        let z = (self / two_pi).round();
        let t = self - two_pi * z;
        let half_pi = Real::PI.mul_pow2(0.5);
        let j = (t / half_pi).round();
        let t = t - half_pi * j;
        let (s, c) = (Real::sin_taylor(t), Real::cos_taylor(t));
        match j.to_f64() as i64 {
            0 => (s, c),
            1 => (c, -s),
            -1 => (-c, s),
            _ => (-s, -c),
        }
    }

    pub fn sin(self) -> Real {
        self.sin_cos().0
    }

    pub fn cos(self) -> Real {
        self.sin_cos().1
    }

    pub fn atan2(self, x: Real) -> Real {
        let y = self;
        if x.is_zero() && y.is_zero() {
            return Real::ZERO;
        }
        if x.is_zero() {
            return if y.0[0] > 0.0 {
                Real::PI.mul_pow2(0.5)
            } else {
                -Real::PI.mul_pow2(0.5)
            };
        }
        if y.is_zero() {
            return if x.0[0] > 0.0 { Real::ZERO } else { Real::PI };
        }
        let rr = (x.sqr() + y.sqr()).sqrt();
        let xx = x / rr;
        let yy = y / rr;
        let mut z = Real::from_f64(y.0[0].atan2(x.0[0]));
        for _ in 0..3 {
            let (s, c) = z.sin_cos();
            if xx.0[0].abs() > yy.0[0].abs() {
                z += (yy - s) / c;
            } else {
                z -= (xx - c) / s;
            }
        }
        z
    }

    pub fn atan(self) -> Real {
        self.atan2(Real::ONE)
    }

    pub fn sinh(self) -> Real {
        if self.0[0].abs() < 0.5 {
            let e = self.exp_m1();
            // sinh = (e^x - e^-x)/2 = (em1 + em1/(em1+1))/2
            return (e + e / (e + 1.0)).mul_pow2(0.5);
        }
        let e = self.exp();
        (e - e.recip()).mul_pow2(0.5)
    }

    pub fn cosh(self) -> Real {
        let e = self.exp();
        (e + e.recip()).mul_pow2(0.5)
    }

    pub fn tanh(self) -> Real {
        if self.0[0] > 40.0 {
            return Real::ONE - (self.mul_pow2(-2.0)).exp().mul_pow2(2.0);
        }
        if self.0[0] < -40.0 {
            return -(Real::ONE - (self.mul_pow2(2.0)).exp().mul_pow2(2.0));
        }
        let e = self.mul_pow2(2.0).exp_m1();
        e / (e + 2.0)
    }

    /// `10^n` computed by binary powering.
    pub fn pow10(n: i32) -> Real {
        Real::from_f64(10.0).powi(n)
    }

    /// Decimal representation with `digits` significant figures.
    /// Plain notation is used for moderate exponents, scientific otherwise.
    pub fn to_string_digits(self, digits: usize) -> String {
        let digits = digits.clamp(1, 64);
        if self.is_nan() {
            return "NaN".into();
        }
        if !self.is_finite() {
            return if self.0[0] > 0.0 { "inf".into() } else { "-inf".into() };
        }
        if self.is_zero() {
            return "0".into();
        }
        let neg = self.0[0] < 0.0;
        let a = self.abs();
        let mut e = a.0[0].log10().floor() as i32;
        let mut m = a / Real::pow10(e);
        if m >= Real::from_f64(10.0) {
            m = m / 10.0;
            e += 1;
        } else if m < Real::ONE {
            m *= 10.0;
            e -= 1;
        }
        let mut ds: Vec<u8> = Vec::with_capacity(digits + 1);
        for _ in 0..=digits {
            let d = m.0[0].floor().clamp(0.0, 9.0);
            ds.push(d as u8);
            m = (m - d) * 10.0;
            // Correct for a limb split that leaves a tiny negative remainder.
            if m.0[0] < 0.0 {
                let mut i = ds.len();
                while i > 0 {
                    i -= 1;
                    if ds[i] > 0 {
                        ds[i] -= 1;
                        break;
                    }
                    ds[i] = 9;
                }
                m += 10.0;
            }
        }
        // Round half up on the guard digit.
        let guard = ds.pop().unwrap_or(0);
        if guard >= 5 {
            let mut i = ds.len();
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.pop();
                    e += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        let digit_str: String = ds.iter().map(|d| (b'0' + d) as char).collect();
        if (-6..21).contains(&e) {
            if e < 0 {
                s.push_str("0.");
                for _ in 0..(-e - 1) {
                    s.push('0');
                }
                s.push_str(&digit_str);
            } else {
                let int_len = (e + 1) as usize;
                if int_len >= digit_str.len() {
                    s.push_str(&digit_str);
                    for _ in digit_str.len()..int_len {
                        s.push('0');
                    }
                } else {
                    s.push_str(&digit_str[..int_len]);
                    s.push('.');
                    s.push_str(&digit_str[int_len..]);
                }
            }
            if s.contains('.') {
                while s.ends_with('0') {
                    s.pop();
                }
                if s.ends_with('.') {
                    s.pop();
                }
            }
        } else {
            s.push_str(&digit_str[..1]);
            let rest = digit_str[1..].trim_end_matches('0');
            if !rest.is_empty() {
                s.push('.');
                s.push_str(rest);
            }
            s.push('e');
            s.push_str(&e.to_string());
        }
        s
    }
}

impl FromStr for Real {
    type Err = ParseRealError;

    fn from_str(src: &str) -> Result<Real, ParseRealError> {
        let err = || ParseRealError(src.to_string());
        let t = src.trim();
        let (neg, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (mant, exp) = match body.find(['e', 'E']) {
            Some(i) => (&body[..i], body[i + 1..].parse::<i32>().map_err(|_| err())?),
            None => (body, 0),
        };
        let (int_part, frac_part) = match mant.find('.') {
            Some(i) => (&mant[..i], &mant[i + 1..]),
            None => (mant, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        let digits: Vec<u8> = int_part
            .bytes()
            .chain(frac_part.bytes())
            .filter(|&c| c != b'_')
            .collect();
        if digits.iter().any(|c| !c.is_ascii_digit()) {
            return Err(err());
        }
        let mut acc = Real::ZERO;
        for chunk in digits.chunks(15) {
            let mut v = 0u64;
            for &c in chunk {
                v = v * 10 + (c - b'0') as u64;
            }
            acc = acc.mul_f64(10f64.powi(chunk.len() as i32)) + v as f64;
        }
        let scale = exp - frac_part.bytes().filter(|&c| c != b'_').count() as i32;
        let val = if scale >= 0 {
            acc * Real::pow10(scale)
        } else {
            acc / Real::pow10(-scale)
        };
        Ok(if neg { -val } else { val })
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Precision counts significant digits.
        let s = self.to_string_digits(f.precision().unwrap_or(34));
        match f.width() {
            Some(w) => write!(f, "{s:>w$}"),
            None => f.write_str(&s),
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(40))
    }
}

impl serde::Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string_digits(QD_DIGITS as usize))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.0 == other.0
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        for i in 0..4 {
            match self.0[i].partial_cmp(&other.0[i])? {
                Ordering::Equal => continue,
                o => return Some(o),
            }
        }
        Some(Ordering::Equal)
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        *self == Real::from_f64(*other)
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.partial_cmp(&Real::from_f64(*other))
    }
}

impl From<f64> for Real {
    fn from(x: f64) -> Real {
        Real::from_f64(x)
    }
}

impl From<i32> for Real {
    fn from(x: i32) -> Real {
        Real::from_f64(x as f64)
    }
}

impl Neg for Real {
    type Output = Real;
    #[inline]
    fn neg(self) -> Real {
        Real([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Add for Real {
    type Output = Real;

    fn add(self, b: Real) -> Real {
        let a = self;
        let (mut i, mut j, mut k) = (0usize, 0usize, 0usize);
        let mut x = [0.0f64; 4];
        let pick = |i: &mut usize, j: &mut usize| -> f64 {
            if *i >= 4 {
                *j += 1;
                b.0[*j - 1]
            } else if *j >= 4 || a.0[*i].abs() > b.0[*j].abs() {
                *i += 1;
                a.0[*i - 1]
            } else {
                *j += 1;
                b.0[*j - 1]
            }
        };
        let u = pick(&mut i, &mut j);
        let v = pick(&mut i, &mut j);
        let (mut u, mut v) = quick_two_sum(u, v);
        while k < 4 {
            if i >= 4 && j >= 4 {
                x[k] = u;
                if k < 3 {
                    k += 1;
                    x[k] = v;
                }
                break;
            }
            let t = pick(&mut i, &mut j);
            let s = quick_three_accum(&mut u, &mut v, t);
            if s != 0.0 {
                x[k] = s;
                k += 1;
            }
        }
        for &ai in &a.0[i..] {
            x[3] += ai;
        }
        for &bj in &b.0[j..] {
            x[3] += bj;
        }
        renorm4(x[0], x[1], x[2], x[3])
    }
}

impl Sub for Real {
    type Output = Real;
    #[inline]
    fn sub(self, b: Real) -> Real {
        self + (-b)
    }
}

impl Mul for Real {
    type Output = Real;

    fn mul(self, b: Real) -> Real {
        let a = self.0;
        let b = b.0;
        let (p0, q0) = two_prod(a[0], b[0]);
        let (p1, q1) = two_prod(a[0], b[1]);
        let (p2, q2) = two_prod(a[1], b[0]);
        let (p3, q3) = two_prod(a[0], b[2]);
        let (p4, q4) = two_prod(a[1], b[1]);
        let (p5, q5) = two_prod(a[2], b[0]);
        let (p1, p2, q0) = three_sum(p1, p2, q0);
        let (p2, q1, q2) = three_sum(p2, q1, q2);
        let (p3, p4, p5) = three_sum(p3, p4, p5);
        let (s0, t0) = two_sum(p2, p3);
        let (s1, t1) = two_sum(q1, p4);
        let s2 = q2 + p5;
        let (s1, t0) = two_sum(s1, t0);
        let s2 = s2 + (t0 + t1);
        let s1 = s1
            + (a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0] + q0 + q3 + q4 + q5);
        renorm5(p0, p1, s0, s1, s2)
    }
}

impl Div for Real {
    type Output = Real;

    fn div(self, b: Real) -> Real {
        let q0 = self.0[0] / b.0[0];
        let rem = self - b.mul_f64(q0);
        let q1 = rem.0[0] / b.0[0];
        let rem = rem - b.mul_f64(q1);
        let q2 = rem.0[0] / b.0[0];
        let rem = rem - b.mul_f64(q2);
        let q3 = rem.0[0] / b.0[0];
        let rem = rem - b.mul_f64(q3);
        let q4 = rem.0[0] / b.0[0];
        renorm5(q0, q1, q2, q3, q4)
    }
}

impl Add<f64> for Real {
    type Output = Real;
    #[inline]
    fn add(self, b: f64) -> Real {
        self.add_f64(b)
    }
}

impl Sub<f64> for Real {
    type Output = Real;
    #[inline]
    fn sub(self, b: f64) -> Real {
        self.add_f64(-b)
    }
}

impl Mul<f64> for Real {
    type Output = Real;
    #[inline]
    fn mul(self, b: f64) -> Real {
        self.mul_f64(b)
    }
}

impl Div<f64> for Real {
    type Output = Real;
    #[inline]
    fn div(self, b: f64) -> Real {
        self.div_f64(b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Real {
            #[inline]
            fn $m(&mut self, b: Real) { *self = *self $op b; }
        }
        impl $tr<f64> for Real {
            #[inline]
            fn $m(&mut self, b: f64) { *self = *self $op b; }
        }
    )*};
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

impl Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::ZERO, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Real {
        s.parse().unwrap()
    }

    fn close(a: Real, b: Real, rel: f64) -> bool {
        (a - b).abs() <= b.abs().max(Real::ONE) * rel
    }

    #[test]
    fn constants_match_decimal_expansions() {
        let pi = p("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899");
        assert!(close(Real::PI, pi, 1e-62));
        let ln2 = p("0.693147180559945309417232121458176568075500134360255254120680009493393621969694715");
        assert!(close(Real::LN2, ln2, 1e-62));
    }

    #[test]
    fn sqrt_two() {
        let s = Real::TWO.sqrt();
        let want = p("1.41421356237309504880168872420969807856967187537694807317667973799");
        assert!(close(s, want, 1e-62));
        assert!(close(s * s, Real::TWO, 1e-62));
    }

    #[test]
    fn exp_ln_roundtrip() {
        for x in [-30.5, -1.0, 1e-8, 0.3, 2.0, 50.25] {
            let x = Real::from_f64(x) / 3.0;
            assert!(close(x.exp().ln(), x, 1e-61), "{x}");
        }
        let e1 = p("2.71828182845904523536028747135266249775724709369995957496696762772407663");
        assert!(close(Real::ONE.exp(), e1, 1e-62));
    }

    #[test]
    fn trig_values() {
        // sin(1) and cos(1) to 64 digits
        let s1 = p("0.8414709848078965066525023216302989996225630607983710656727517099919104");
        let c1 = p("0.5403023058681397174009366074429766037323104206179222276700972553811003");
        let (s, c) = Real::ONE.sin_cos();
        assert!(close(s, s1, 1e-62));
        assert!(close(c, c1, 1e-62));
        let big = Real::from_f64(100.0).sin();
        let s100 = p("-0.506365641109758793656557610459785432065032721290657323443392");
        assert!(close(big, s100, 1e-48));
        let at = Real::ONE.atan2(Real::ONE);
        assert!(close(at * 4.0, Real::PI, 1e-62));
    }

    #[test]
    fn cbrt_and_powf() {
        let x = Real::from_f64(-27.0);
        assert!(close(x.cbrt(), Real::from_f64(-3.0), 1e-62));
        let y = Real::from_f64(2.0).powf(Real::HALF);
        assert!(close(y, Real::TWO.sqrt(), 1e-61));
    }

    #[test]
    fn decimal_roundtrip() {
        let s = "2.393644016482303115600000000000000000000000000000000000000000";
        let x = p(s);
        assert_eq!(x.to_string_digits(20), "2.3936440164823031156");
        let y = p("-1.25e-30");
        assert_eq!(y.to_string_digits(10), "-1.25e-30");
        assert_eq!(p("123456").to_string_digits(10), "123456");
        assert_eq!(p("0.001").to_string_digits(5), "0.001");
        let z = Real::ONE / 3.0;
        let again: Real = z.to_string_digits(62).parse().unwrap();
        assert!(close(again, z, 1e-61));
        assert!("1.2.3".parse::<Real>().is_err());
        assert!("".parse::<Real>().is_err());
    }

    #[test]
    fn rounding_carries() {
        assert_eq!(p("9.9999996").to_string_digits(5), "10");
        assert_eq!(format!("{:.4}", p("9.75591e-7")), "9.756e-7");
        assert_eq!(format!("{:8.3}", p("1.5")), "     1.5");
        assert_eq!(p("0.99995").to_string_digits(4), "1");
    }

    #[test]
    fn ordering_uses_all_limbs() {
        let a = Real::ONE;
        let b = Real::ONE + Real::from_f64(1e-40);
        assert!(b > a);
        assert!(a < b);
        assert_eq!(a.max(b), b);
    }
}

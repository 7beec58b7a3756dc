use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::real::Real;

/// Field operations shared by [`Real`] and [`Complex`], enough to build
/// jets and run the Taylor integrator over either.
pub trait Scalar:
    Copy
    + fmt::Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: Real) -> Self;
    /// Modulus.
    fn norm(self) -> Real;
    fn scale(self, k: Real) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;

    fn is_zero(self) -> bool {
        self.norm().is_zero()
    }
}

impl Scalar for Real {
    #[inline]
    fn zero() -> Real {
        Real::ZERO
    }
    #[inline]
    fn one() -> Real {
        Real::ONE
    }
    #[inline]
    fn from_real(x: Real) -> Real {
        x
    }
    #[inline]
    fn norm(self) -> Real {
        self.abs()
    }
    #[inline]
    fn scale(self, k: Real) -> Real {
        self * k
    }
    fn sqrt(self) -> Real {
        Real::sqrt(self)
    }
    fn exp(self) -> Real {
        Real::exp(self)
    }
    fn ln(self) -> Real {
        Real::ln(self)
    }
}

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub const ZERO: Complex = Complex {
        re: Real::ZERO,
        im: Real::ZERO,
    };
    pub const ONE: Complex = Complex {
        re: Real::ONE,
        im: Real::ZERO,
    };
    pub const I: Complex = Complex {
        re: Real::ZERO,
        im: Real::ONE,
    };

    #[inline]
    pub const fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    #[inline]
    pub const fn real(re: Real) -> Complex {
        Complex { re, im: Real::ZERO }
    }

    pub fn conj(self) -> Complex {
        Complex::new(self.re, -self.im)
    }

    pub fn norm_sqr(self) -> Real {
        self.re.sqr() + self.im.sqr()
    }

    pub fn abs(self) -> Real {
        let a = self.re.abs();
        let b = self.im.abs();
        let (big, small) = if a >= b { (a, b) } else { (b, a) };
        if big.is_zero() {
            return Real::ZERO;
        }
        let q = small / big;
        big * (Real::ONE + q.sqr()).sqrt()
    }

    pub fn arg(self) -> Real {
        self.im.atan2(self.re)
    }

    /// `i * self`.
    #[inline]
    pub fn mul_i(self) -> Complex {
        Complex::new(-self.im, self.re)
    }

    pub fn recip(self) -> Complex {
        Complex::ONE / self
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(self) -> Complex {
        if self.im.is_zero() {
            return if self.re.is_sign_negative() {
                Complex::new(Real::ZERO, (-self.re).sqrt())
            } else {
                Complex::real(self.re.sqrt())
            };
        }
        let m = self.abs();
        let t = ((m + self.re.abs()) * 0.5).sqrt();
        if !self.re.is_sign_negative() {
            Complex::new(t, self.im / (t * 2.0))
        } else {
            let im = if self.im.is_sign_negative() { -t } else { t };
            Complex::new(self.im.abs() / (t * 2.0), im)
        }
    }

    pub fn exp(self) -> Complex {
        let m = self.re.exp();
        if self.im.is_zero() {
            return Complex::real(m);
        }
        let (s, c) = self.im.sin_cos();
        Complex::new(m * c, m * s)
    }

    pub fn ln(self) -> Complex {
        Complex::new(self.abs().ln(), self.arg())
    }
}

impl Scalar for Complex {
    #[inline]
    fn zero() -> Complex {
        Complex::ZERO
    }
    #[inline]
    fn one() -> Complex {
        Complex::ONE
    }
    #[inline]
    fn from_real(x: Real) -> Complex {
        Complex::real(x)
    }
    fn norm(self) -> Real {
        self.abs()
    }
    #[inline]
    fn scale(self, k: Real) -> Complex {
        Complex::new(self.re * k, self.im * k)
    }
    fn sqrt(self) -> Complex {
        Complex::sqrt(self)
    }
    fn exp(self) -> Complex {
        Complex::exp(self)
    }
    fn ln(self) -> Complex {
        Complex::ln(self)
    }
}

impl From<Real> for Complex {
    fn from(x: Real) -> Complex {
        Complex::real(x)
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or(34);
        if self.im.is_sign_negative() {
            write!(f, "{:.*} - {:.*}i", d, self.re, d, -self.im)
        } else {
            write!(f, "{:.*} + {:.*}i", d, self.re, d, self.im)
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    #[inline]
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

impl Add for Complex {
    type Output = Complex;
    #[inline]
    fn add(self, b: Complex) -> Complex {
        Complex::new(self.re + b.re, self.im + b.im)
    }
}

impl Sub for Complex {
    type Output = Complex;
    #[inline]
    fn sub(self, b: Complex) -> Complex {
        Complex::new(self.re - b.re, self.im - b.im)
    }
}

impl Mul for Complex {
    type Output = Complex;
    #[inline]
    fn mul(self, b: Complex) -> Complex {
        if self.im.is_zero() && b.im.is_zero() {
            return Complex::real(self.re * b.re);
        }
        Complex::new(
            self.re * b.re - self.im * b.im,
            self.re * b.im + self.im * b.re,
        )
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, b: Complex) -> Complex {
        if b.im.is_zero() {
            return Complex::new(self.re / b.re, self.im / b.re);
        }
        // Smith's algorithm.
        if b.re.abs() >= b.im.abs() {
            let q = b.im / b.re;
            let den = b.re + b.im * q;
            Complex::new((self.re + self.im * q) / den, (self.im - self.re * q) / den)
        } else {
            let q = b.re / b.im;
            let den = b.re * q + b.im;
            Complex::new((self.re * q + self.im) / den, (self.im * q - self.re) / den)
        }
    }
}

impl Add<Real> for Complex {
    type Output = Complex;
    fn add(self, b: Real) -> Complex {
        Complex::new(self.re + b, self.im)
    }
}

impl Sub<Real> for Complex {
    type Output = Complex;
    fn sub(self, b: Real) -> Complex {
        Complex::new(self.re - b, self.im)
    }
}

impl Mul<Real> for Complex {
    type Output = Complex;
    fn mul(self, b: Real) -> Complex {
        Complex::new(self.re * b, self.im * b)
    }
}

impl Div<Real> for Complex {
    type Output = Complex;
    fn div(self, b: Real) -> Complex {
        Complex::new(self.re / b, self.im / b)
    }
}

macro_rules! assign_ops {
    ($($tr:ident $m:ident $op:tt),*) => {$(
        impl $tr for Complex {
            #[inline]
            fn $m(&mut self, b: Complex) { *self = *self $op b; }
        }
    )*};
}

assign_ops!(AddAssign add_assign +, SubAssign sub_assign -, MulAssign mul_assign *, DivAssign div_assign /);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(a: f64, b: f64) -> Complex {
        Complex::new(Real::from_f64(a), Real::from_f64(b))
    }

    fn near(a: Complex, b: Complex) -> bool {
        (a - b).abs() <= Real::from_f64(1e-60)
    }

    #[test]
    fn field_ops() {
        let a = c(1.5, -2.0);
        let b = c(-0.25, 3.0);
        assert!(near((a * b) / b, a));
        assert!(near(a * a.recip(), Complex::ONE));
        assert!(near(Complex::I * Complex::I, -Complex::ONE));
    }

    #[test]
    fn sqrt_branches() {
        for z in [c(-4.0, 0.0), c(3.0, 4.0), c(-3.0, 4.0), c(-3.0, -4.0), c(0.0, 2.0)] {
            let s = z.sqrt();
            assert!(near(s * s, z), "{z:?}");
            assert!(!s.re.is_sign_negative());
        }
        assert!(near(c(-4.0, 0.0).sqrt(), c(0.0, 2.0)));
    }

    #[test]
    fn exp_ln_inverse() {
        let z = c(0.3, -1.2);
        assert!(near(z.exp().ln(), z));
        let e = Complex::new(Real::ZERO, Real::PI).exp();
        assert!(near(e, -Complex::ONE));
    }
}

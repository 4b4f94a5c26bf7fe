//! Overflow-safe complex numbers.
//!
//! A [`LogComplex`] is a complex mantissa scaled by an integer power of two.
//! It is addressed through its natural log-magnitude and phase, but storing
//! the binary exponent separately keeps conversions from and to
//! [`Complex64`] exact, and products lose nothing beyond ordinary rounding.

use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::ops::{Div, Mul, Neg};

#[derive(Clone, Copy, PartialEq)]
pub struct LogComplex {
    /// Normalized so that `max(|re|, |im|)` lies in `[1, 2)`, or zero.
    mantissa: Complex64,
    exp2: i64,
}

/// Splits a finite non-zero `x` into `(m, e)` with `x = m * 2^e`, `|m|` in `[1, 2)`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal
        let (m, e) = frexp(x * 2f64.powi(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    (m, biased - 1023)
}

/// `x * 2^e` without intermediate overflow.
pub(crate) fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mut x = x;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

pub(crate) fn wrap_phase(p: f64) -> f64 {
    if p > -PI && p <= PI {
        return p;
    }
    let mut q = p.rem_euclid(2.0 * PI);
    if q > PI {
        q -= 2.0 * PI;
    }
    if q <= -PI {
        q += 2.0 * PI;
    }
    q
}

/// `|log_mag|` above this leaves the `i64` exponent range.
const EXP_LIMIT: f64 = 1e18;

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { mantissa: Complex64::new(0.0, 0.0), exp2: 0 };
    pub const ONE: LogComplex = LogComplex { mantissa: Complex64::new(1.0, 0.0), exp2: 0 };

    /// `mantissa * 2^exp2`, renormalized.
    pub fn from_scaled(mantissa: Complex64, exp2: i64) -> Self {
        if mantissa.re == 0.0 && mantissa.im == 0.0 {
            return Self::ZERO;
        }
        if !(mantissa.re.is_finite() && mantissa.im.is_finite()) {
            return LogComplex { mantissa, exp2: 0 };
        }
        let big = mantissa.re.abs().max(mantissa.im.abs());
        let (_, e) = frexp(big);
        let m = Complex64::new(ldexp(mantissa.re, -e), ldexp(mantissa.im, -e));
        LogComplex { mantissa: m, exp2: exp2.saturating_add(e) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Self::from_scaled(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    /// `exp(log_mag) * exp(i phase)`; `log_mag = -inf` gives exact zero.
    pub fn from_polar(log_mag: f64, phase: f64) -> Self {
        if log_mag == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        // beyond any representable binary exponent
        if log_mag < -EXP_LIMIT {
            return Self::ZERO;
        }
        if !log_mag.is_finite() || log_mag > EXP_LIMIT {
            return LogComplex { mantissa: Complex64::new(f64::INFINITY, 0.0), exp2: 0 };
        }
        let e = (log_mag / LN_2).floor();
        let r = (log_mag - e * LN_2).exp();
        Self::from_scaled(Complex64::from_polar(r, wrap_phase(phase)), e as i64)
    }

    /// `exp(w)` for complex `w`.
    pub fn exp(w: Complex64) -> Self {
        Self::from_polar(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.mantissa.re.is_finite() && self.mantissa.im.is_finite()
    }

    /// Natural log of the modulus: `-inf` for zero, `+inf` for overflowed values.
    pub fn log_mag(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        if !self.is_finite() {
            return if self.mantissa.re.is_nan() || self.mantissa.im.is_nan() {
                f64::NAN
            } else {
                f64::INFINITY
            };
        }
        self.mantissa.norm().ln() + self.exp2 as f64 * LN_2
    }

    /// Argument in `(-pi, pi]`; zero has phase 0.
    pub fn phase(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.mantissa.arg()
        }
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(ldexp(self.mantissa.re, self.exp2), ldexp(self.mantissa.im, self.exp2))
    }

    /// Modulus as a plain float (may overflow to infinity).
    pub fn abs(&self) -> f64 {
        ldexp(self.mantissa.norm(), self.exp2)
    }

    pub fn conj(&self) -> Self {
        LogComplex { mantissa: self.mantissa.conj(), exp2: self.exp2 }
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_scaled(self.mantissa * k, self.exp2)
    }

    pub fn recip(&self) -> Self {
        LogComplex::ONE / *self
    }

    /// Integer power by repeated squaring.
    pub fn powu(&self, n: u64) -> Self {
        let mut out = LogComplex::ONE;
        let mut base = *self;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        out
    }

    /// `self^(1/p)` on the principal branch, as a real `f64` magnitude.
    pub fn root_abs(&self, p: f64) -> f64 {
        (self.log_mag() / p).exp()
    }

    /// Log of the modulus, with the phase as imaginary part.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_mag(), self.phase())
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        LogComplex::from_scaled(self.mantissa * rhs.mantissa, self.exp2.saturating_add(rhs.exp2))
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        if rhs.is_zero() {
            return if self.is_zero() {
                LogComplex { mantissa: Complex64::new(f64::NAN, f64::NAN), exp2: 0 }
            } else {
                LogComplex { mantissa: Complex64::new(f64::INFINITY, 0.0), exp2: 0 }
            };
        }
        LogComplex::from_scaled(self.mantissa / rhs.mantissa, self.exp2.saturating_sub(rhs.exp2))
    }
}

impl Neg for LogComplex {
    type Output = LogComplex;
    fn neg(self) -> LogComplex {
        LogComplex { mantissa: -self.mantissa, exp2: self.exp2 }
    }
}

impl From<Complex64> for LogComplex {
    fn from(z: Complex64) -> Self {
        LogComplex::from_complex(z)
    }
}

impl From<f64> for LogComplex {
    fn from(x: f64) -> Self {
        LogComplex::from_real(x)
    }
}

impl fmt::Debug for LogComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogComplex(exp({}) * exp(i {}))", self.log_mag(), self.phase())
    }
}

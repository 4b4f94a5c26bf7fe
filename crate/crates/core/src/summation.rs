//! Compensated (Neumaier) summation, plain and with a running binary scale.

use crate::logcomplex::{ldexp, LogComplex};
use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Neumaier-compensated complex accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: Complex64) {
        let (sr, er) = two_sum(self.sum.re, x.re);
        let (si, ei) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(sr, si);
        self.comp += Complex64::new(er, ei);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }

    /// Multiplies the running state by an exact power of two.
    pub(crate) fn rescale(&mut self, e: i64) {
        self.sum = Complex64::new(ldexp(self.sum.re, e), ldexp(self.sum.im, e));
        self.comp = Complex64::new(ldexp(self.comp.re, e), ldexp(self.comp.im, e));
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of [`LogComplex`] terms.
///
/// The accumulator is kept relative to `2^scale`, where `scale` tracks the
/// largest binary exponent seen so far, so terms far beyond the `f64` range
/// are summed without overflow.
#[derive(Clone, Copy, Debug)]
pub struct ScaledSum {
    acc: CompensatedSum,
    scale: i64,
    empty: bool,
    overflowed: bool,
}

impl Default for ScaledSum {
    fn default() -> Self {
        ScaledSum { acc: CompensatedSum::new(), scale: 0, empty: true, overflowed: false }
    }
}

impl ScaledSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, t: LogComplex) {
        if t.is_zero() {
            return;
        }
        if !t.is_finite() {
            self.overflowed = true;
            return;
        }
        let e = t.exp2();
        if self.empty {
            self.scale = e;
            self.empty = false;
        } else if e > self.scale {
            self.acc.rescale(self.scale - e);
            self.scale = e;
        }
        let m = t.mantissa();
        let d = e - self.scale;
        self.acc.add(Complex64::new(ldexp(m.re, d), ldexp(m.im, d)));
    }

    pub fn value(&self) -> LogComplex {
        if self.overflowed {
            return LogComplex::from_polar(f64::INFINITY, 0.0);
        }
        if self.empty {
            return LogComplex::ZERO;
        }
        LogComplex::from_scaled(self.acc.value(), self.scale)
    }
}

impl FromIterator<LogComplex> for ScaledSum {
    fn from_iter<I: IntoIterator<Item = LogComplex>>(iter: I) -> Self {
        let mut s = ScaledSum::new();
        for t in iter {
            s.add(t);
        }
        s
    }
}

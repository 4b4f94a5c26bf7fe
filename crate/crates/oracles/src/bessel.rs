//! `J_n(z)` from the ascending series in exact integer arithmetic.
//!
//! The argument is an `f64` pair, therefore an exact dyadic rational. With
//! `z/2 = (A + iB) 2^E` the series is
//!
//! ```text
//! J_n(z) = (z/2)^n / n! * sum_k u_k,   u_0 = 1,
//! u_{k+1} = u_k * (-(z/2)^2) / ((k + 1)(n + k + 1)),
//! ```
//!
//! where the inner sum is carried in fixed point with `FRACTION_BITS`
//! fractional bits and the prefactor is kept exact. Only the final value is
//! rounded to `f64`, so the result carries far more than 50 correct digits
//! before that rounding.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

const FRACTION_BITS: u64 = 768;

/// An oracle value in a form that cannot overflow: `(re + i im) * 2^exp2`.
#[derive(Clone, Copy, Debug)]
pub struct OracleValue {
    pub re: f64,
    pub im: f64,
    pub exp2: i64,
}

impl OracleValue {
    /// Plain complex value (may overflow to infinity or underflow to zero).
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(ldexp(self.re, self.exp2), ldexp(self.im, self.exp2))
    }

    /// Natural log of the modulus; `-inf` for an exact zero.
    pub fn ln_abs(self) -> f64 {
        let m = self.re.hypot(self.im);
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            m.ln() + self.exp2 as f64 * std::f64::consts::LN_2
        }
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }
}

/// `x = m * 2^e` exactly.
fn decompose(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & ((1u64 << 52) - 1)) as i64;
    let (mant, exp) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1 << 52), biased - 1075)
    };
    (BigInt::from(sign * mant), exp)
}

fn ldexp(x: f64, e: i64) -> f64 {
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

fn shift(x: &BigInt, by: i64) -> BigInt {
    if by >= 0 {
        x << (by as usize)
    } else {
        x >> ((-by) as usize)
    }
}

/// `J_n(z)` for integer order `n >= 0`.
pub fn bessel_j(n: u32, z: Complex64) -> OracleValue {
    assert!(z.re.is_finite() && z.im.is_finite());
    if z.re == 0.0 && z.im == 0.0 {
        let re = if n == 0 { 1.0 } else { 0.0 };
        return OracleValue { re, im: 0.0, exp2: 0 };
    }

    // z/2 = (a + ib) 2^e
    let (mx, ex) = decompose(z.re);
    let (my, ey) = decompose(z.im);
    let e = match (mx.is_zero(), my.is_zero()) {
        (true, _) => ey,
        (_, true) => ex,
        _ => ex.min(ey),
    } - 1;
    let a = if mx.is_zero() { mx } else { shift(&mx, ex - 1 - e) };
    let b = if my.is_zero() { my } else { shift(&my, ey - 1 - e) };

    // w = -(z/2)^2 = (wr + i wi) 2^(2e)
    let wr = -(&a * &a - &b * &b);
    let wi = -(BigInt::from(2) * &a * &b);
    let wexp = 2 * e;

    let one = BigInt::one() << (FRACTION_BITS as usize);
    let mut ur = one.clone();
    let mut ui = BigInt::zero();
    let mut sr = one;
    let mut si = BigInt::zero();
    let n_big = n as u64;
    let mut k: u64 = 0;
    loop {
        let pr = &ur * &wr - &ui * &wi;
        let pi = &ur * &wi + &ui * &wr;
        let d = BigInt::from((k + 1) * (n_big + k + 1));
        ur = shift(&pr, wexp) / &d;
        ui = shift(&pi, wexp) / &d;
        k += 1;
        if ur.is_zero() && ui.is_zero() {
            break;
        }
        sr += &ur;
        si += &ui;
    }

    // prefactor (a + ib)^n, with 2^(n e) / n! applied at the end
    let mut pr = BigInt::one();
    let mut pi = BigInt::zero();
    for _ in 0..n {
        let nr = &pr * &a - &pi * &b;
        let ni = &pr * &b + &pi * &a;
        pr = nr;
        pi = ni;
    }
    let nr = &pr * &sr - &pi * &si;
    let ni = &pr * &si + &pi * &sr;
    let mut fact = BigUint::one();
    for j in 2..=n as u64 {
        fact *= j;
    }
    let exp2 = n as i64 * e - FRACTION_BITS as i64;
    ratio_pair(&nr, &ni, &fact, exp2)
}

/// `(nr + i ni) / den * 2^exp2` rounded to an `OracleValue`.
fn ratio_pair(nr: &BigInt, ni: &BigInt, den: &BigUint, exp2: i64) -> OracleValue {
    let bits = nr.bits().max(ni.bits()) as i64;
    if bits == 0 {
        return OracleValue { re: 0.0, im: 0.0, exp2: 0 };
    }
    let den = BigInt::from_biguint(Sign::Plus, den.clone());
    // quotient with ~80 significant bits for the larger component
    let s = 80 + den.bits() as i64 - bits;
    let qr = shift(nr, s) / &den;
    let qi = shift(ni, s) / &den;
    let to_f = |q: &BigInt| -> f64 {
        let mag = q.abs().to_f64().unwrap_or(f64::INFINITY);
        if q.is_negative() {
            -mag
        } else {
            mag
        }
    };
    // keep the mantissas near 2^0 so that OracleValue never overflows
    let re = to_f(&qr) * 2f64.powi(-80);
    let im = to_f(&qi) * 2f64.powi(-80);
    OracleValue { re, im, exp2: exp2 - s + 80 }
}

//! Bessel functions of the first kind, integer order, complex argument.
//!
//! Small arguments (`|z| <= max(2, n/4)`) use the ascending series. Larger
//! ones use Miller's backward recurrence started at
//! `n + ceil(10 + 1.5 |z|)`, doubled until two runs agree to `1e-12`.
//! The recurrence is normalized with `J_0 + 2 sum J_2k = 1` near the real
//! axis and with `J_0 + 2 sum (∓i)^k J_k = exp(∓iz)` when `|Im z| > 1`,
//! where the even-order identity would cancel catastrophically.
//!
//! Every routine works in [`LogComplex`] internally, so `J_n(nz)` for large
//! `n` neither overflows nor underflows.

use crate::logcomplex::LogComplex;
use crate::summation::CompensatedSum;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum BesselError {
    #[error("negative order {0}")]
    NegativeOrder(i64),
    #[error("order must be at least 1, got {0}")]
    OrderBelowOne(i64),
    #[error("non-finite argument {0}")]
    NonFinite(Complex64),
    #[error("argument {0} lies on the real half-lines |x| >= 1")]
    OnBranchSet(Complex64),
    #[error("argument must be non-zero")]
    ZeroArgument,
}

fn check(n: i64, z: Complex64) -> Result<usize, BesselError> {
    if n < 0 {
        return Err(BesselError::NegativeOrder(n));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(BesselError::NonFinite(z));
    }
    Ok(n as usize)
}

/// `J_n(z)`.
pub fn bessel_j(n: i64, z: Complex64) -> Result<Complex64, BesselError> {
    bessel_j_log(n, z).map(|v| v.to_complex())
}

/// `J_n(z)` in overflow-safe form.
pub fn bessel_j_log(n: i64, z: Complex64) -> Result<LogComplex, BesselError> {
    let n = check(n, z)?;
    Ok(j_log(n, z))
}

/// `J_n(n z)` in overflow-safe form, the building block of Kapteyn series.
pub fn bessel_j_scaled(n: i64, z: Complex64) -> Result<LogComplex, BesselError> {
    if n < 1 {
        return Err(BesselError::OrderBelowOne(n));
    }
    let n = check(n, z)?;
    Ok(j_log(n, z * n as f64))
}

/// `J_n'(z) = (J_{n-1}(z) - J_{n+1}(z)) / 2`, with `J_{-1} = -J_1`.
pub fn bessel_j_derivative(n: i64, z: Complex64) -> Result<Complex64, BesselError> {
    let n = check(n, z)?;
    Ok(derivative_from_triplet(&j_triplet(n, z)).to_complex())
}

/// The exponent `w` and square root `sqrt(1 - z^2)` of the large-order
/// asymptotics `J_n(nz) ~ exp(-n w) / (sqrt(2 pi n) (1 - z^2)^(1/4))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticParams {
    pub w: Complex64,
    pub sqrt_term: Complex64,
}

impl AsymptoticParams {
    pub fn new(z: Complex64) -> Result<Self, BesselError> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(BesselError::NonFinite(z));
        }
        if z.im == 0.0 && z.re.abs() >= 1.0 {
            return Err(BesselError::OnBranchSet(z));
        }
        if z.re == 0.0 && z.im == 0.0 {
            return Err(BesselError::ZeroArgument);
        }
        let one = Complex64::new(1.0, 0.0);
        let s = (one - z * z).sqrt();
        let w = ((one + s) / z).ln() - s;
        Ok(AsymptoticParams { w, sqrt_term: s })
    }
}

/// Carlini–Meissel approximation of `J_n(nz)` for `z` off the half-lines
/// `|x| >= 1` of the real axis.
pub fn carlini_meissel(n: i64, z: Complex64) -> Result<LogComplex, BesselError> {
    if n < 1 {
        return Err(BesselError::OrderBelowOne(n));
    }
    let p = AsymptoticParams::new(z)?;
    let nf = n as f64;
    let growth = LogComplex::exp(-p.w * nf);
    // principal (1 - z^2)^(1/4) is the principal root of the principal root
    let quarter = LogComplex::from_complex(p.sqrt_term.sqrt());
    let denom = quarter.scale((2.0 * PI * nf).sqrt());
    Ok(growth / denom)
}

// ---------------------------------------------------------------------------
// internals

fn in_series_regime(n: usize, z: Complex64) -> bool {
    z.norm() <= (n as f64 / 4.0).max(2.0)
}

pub(crate) fn j_log(n: usize, z: Complex64) -> LogComplex {
    if z.re == 0.0 && z.im == 0.0 {
        return if n == 0 { LogComplex::ONE } else { LogComplex::ZERO };
    }
    if in_series_regime(n, z) {
        series(n, z)
    } else {
        miller(z, n, n)[0]
    }
}

/// `[J_{n-1}, J_n, J_{n+1}]` at `z`, with `J_{-1} = -J_1`.
pub(crate) fn j_triplet(n: usize, z: Complex64) -> [LogComplex; 3] {
    if z.re == 0.0 && z.im == 0.0 {
        let at = |k: usize| if k == 0 { LogComplex::ONE } else { LogComplex::ZERO };
        let lower = if n == 0 { LogComplex::ZERO } else { at(n - 1) };
        return [lower, at(n), at(n + 1)];
    }
    let lo = n.saturating_sub(1);
    if in_series_regime(lo, z) {
        let lower = if n == 0 { -series(1, z) } else { series(n - 1, z) };
        [lower, series(n, z), series(n + 1, z)]
    } else {
        let v = miller(z, lo, n + 1);
        if n == 0 {
            [-v[1], v[0], v[1]]
        } else {
            [v[0], v[1], v[2]]
        }
    }
}

/// `J_0(z), ..., J_{n_max}(z)`.
pub(crate) fn j_sequence(n_max: usize, z: Complex64) -> Vec<LogComplex> {
    if z.re == 0.0 && z.im == 0.0 {
        return (0..=n_max).map(|k| if k == 0 { LogComplex::ONE } else { LogComplex::ZERO }).collect();
    }
    if in_series_regime(0, z) {
        (0..=n_max).map(|k| series(k, z)).collect()
    } else {
        miller(z, 0, n_max)
    }
}

pub(crate) fn derivative_from_triplet(t: &[LogComplex; 3]) -> LogComplex {
    let mut s = crate::summation::ScaledSum::new();
    s.add(t[0].scale(0.5));
    s.add(t[2].scale(-0.5));
    s.value()
}

fn series(n: usize, z: Complex64) -> LogComplex {
    let half = z * 0.5;
    let mut prefactor = LogComplex::ONE;
    let h = LogComplex::from_complex(half);
    for k in 1..=n {
        prefactor = prefactor * h.scale(1.0 / k as f64);
    }
    let w = -(half * half);
    let wn = w.norm();
    let mut u = Complex64::new(1.0, 0.0);
    let mut sum = CompensatedSum::new();
    sum.add(u);
    for k in 0..10_000usize {
        let d = ((k + 1) * (n + k + 1)) as f64;
        u *= w / d;
        sum.add(u);
        if wn / d < 0.5 && u.norm() <= 1e-17 * sum.value().norm() {
            break;
        }
    }
    prefactor * LogComplex::from_complex(sum.value())
}

#[derive(Clone, Copy)]
enum Normalization {
    /// `J_0 + 2 sum_k J_{2k} = 1`
    Even,
    /// `J_0 + 2 sum_k (-i)^k J_k = exp(-iz)`, for `Im z > 0`
    ExpMinus,
    /// `J_0 + 2 sum_k i^k J_k = exp(iz)`, for `Im z < 0`
    ExpPlus,
}

impl Normalization {
    fn for_arg(z: Complex64) -> Self {
        if z.im.abs() <= 1.0 {
            Normalization::Even
        } else if z.im > 0.0 {
            Normalization::ExpMinus
        } else {
            Normalization::ExpPlus
        }
    }

    fn weight(self, k: usize) -> Complex64 {
        if k == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let unit = |q: usize| match q % 4 {
            0 => Complex64::new(2.0, 0.0),
            1 => Complex64::new(0.0, 2.0),
            2 => Complex64::new(-2.0, 0.0),
            _ => Complex64::new(0.0, -2.0),
        };
        match self {
            Normalization::Even => {
                if k % 2 == 0 {
                    Complex64::new(2.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            // (-i)^k = i^(3k)
            Normalization::ExpMinus => unit(3 * (k % 4)),
            Normalization::ExpPlus => unit(k % 4),
        }
    }

    fn target(self, z: Complex64) -> LogComplex {
        let i = Complex64::new(0.0, 1.0);
        match self {
            Normalization::Even => LogComplex::ONE,
            Normalization::ExpMinus => LogComplex::exp(-i * z),
            Normalization::ExpPlus => LogComplex::exp(i * z),
        }
    }
}

const RESCALE_BITS: i64 = 500;

/// One backward sweep from order `start`, returning `J_lo..=J_hi`.
fn miller_run(z: Complex64, start: usize, lo: usize, hi: usize) -> Vec<LogComplex> {
    let norm_kind = Normalization::for_arg(z);
    let two_over_z = Complex64::new(2.0, 0.0) / z;
    let threshold = 2f64.powi(RESCALE_BITS as i32);
    let shrink = 2f64.powi(-RESCALE_BITS as i32);

    let mut next = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    let mut scale: i64 = 0;
    let mut norm = CompensatedSum::new();
    let mut captured = vec![(Complex64::new(0.0, 0.0), 0i64); hi - lo + 1];

    let mut k = start;
    loop {
        if (lo..=hi).contains(&k) {
            captured[k - lo] = (cur, scale);
        }
        let w = norm_kind.weight(k);
        if w.re != 0.0 || w.im != 0.0 {
            norm.add(w * cur);
        }
        if k == 0 {
            break;
        }
        let prev = two_over_z * (k as f64) * cur - next;
        next = cur;
        cur = prev;
        if cur.norm() > threshold {
            cur *= shrink;
            next *= shrink;
            norm.rescale(-RESCALE_BITS);
            scale += RESCALE_BITS;
        }
        k -= 1;
    }

    let factor = norm_kind.target(z) / LogComplex::from_scaled(norm.value(), scale);
    captured
        .into_iter()
        .map(|(c, s)| LogComplex::from_scaled(c, s) * factor)
        .collect()
}

fn agree(a: &[LogComplex], b: &[LogComplex], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        if y.is_zero() {
            return x.is_zero();
        }
        let r = (*x / *y).to_complex();
        (r - Complex64::new(1.0, 0.0)).norm() <= tol
    })
}

fn miller(z: Complex64, lo: usize, hi: usize) -> Vec<LogComplex> {
    let mut start = hi + (10.0 + 1.5 * z.norm()).ceil() as usize;
    let mut prev = miller_run(z, start, lo, hi);
    for _ in 0..8 {
        start *= 2;
        let cur = miller_run(z, start, lo, hi);
        if agree(&prev, &cur, 1e-12) {
            return cur;
        }
        prev = cur;
    }
    prev
}

#[cfg(test)]
mod tests {
    use super::*;
    use kapteyn_oracles::bessel_j as oracle;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(bessel_j(3, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(bessel_j_scaled(1, c(0.0, 0.0)).unwrap().is_zero());
    }

    #[test]
    fn j1_at_one() {
        let j = bessel_j(1, c(1.0, 0.0)).unwrap();
        assert!(rel(j, c(0.440_050_585_744_933_5, 0.0)) < 1e-14);
    }

    #[test]
    fn j5_complex_and_watson_bound() {
        let z = c(3.0, 4.0);
        let j = bessel_j(5, z).unwrap();
        let want = oracle(5, z).to_complex();
        assert!(rel(j, want) < 1e-12);
        let bound = 2.5f64.powi(5) / 120.0 * 4f64.exp();
        assert!(j.norm() <= bound);
    }

    #[test]
    fn errors() {
        assert_eq!(bessel_j(-1, c(1.0, 0.0)), Err(BesselError::NegativeOrder(-1)));
        assert!(matches!(bessel_j(0, c(f64::NAN, 0.0)), Err(BesselError::NonFinite(_))));
        assert!(matches!(carlini_meissel(3, c(1.5, 0.0)), Err(BesselError::OnBranchSet(_))));
        assert!(matches!(carlini_meissel(3, c(-1.0, 0.0)), Err(BesselError::OnBranchSet(_))));
        assert_eq!(carlini_meissel(3, c(0.0, 0.0)), Err(BesselError::ZeroArgument));
        assert_eq!(bessel_j_scaled(0, c(1.0, 0.0)), Err(BesselError::OrderBelowOne(0)));
    }

    #[test]
    fn large_imaginary_argument() {
        for &(n, z) in &[(0usize, c(0.0, 40.0)), (7, c(-3.0, -38.0)), (50, c(10.0, 35.0)), (2, c(39.0, 1.5))] {
            let j = j_log(n, z);
            let o = oracle(n as u32, z);
            assert!((j.log_mag() - o.ln_abs()).abs() < 1e-11, "n={n} z={z}");
            let r = (j.to_complex() - o.to_complex()).norm() / o.to_complex().norm();
            assert!(r < 1e-10, "n={n} z={z} rel={r}");
        }
    }

    #[test]
    fn scaled_form_at_large_order() {
        // J_40(36 i), oracle computed in exact arithmetic
        let v = bessel_j_scaled(40, c(0.0, 0.9)).unwrap();
        let o = oracle(40, c(0.0, 36.0));
        assert!((v.log_mag() - o.ln_abs()).abs() < 1e-9);
        let r = (v.to_complex() - o.to_complex()).norm() / o.to_complex().norm();
        assert!(r < 1e-9);
    }

    #[test]
    fn scaled_form_respects_kapteyn_bound_at_half() {
        let v = bessel_j_scaled(25, c(0.5, 0.0)).unwrap();
        let omega = crate::height::omega_kapteyn(c(0.5, 0.0));
        assert!(v.log_mag() <= 25.0 * omega.ln());
    }

    #[test]
    fn carlini_meissel_ratio_tends_to_one() {
        let z = c(0.5, 0.0);
        let mut last = f64::INFINITY;
        for &n in &[10i64, 50, 200] {
            let exact = bessel_j_scaled(n, z).unwrap();
            let approx = carlini_meissel(n, z).unwrap();
            let ratio = (exact / approx).to_complex();
            let dev = (ratio - 1.0).norm();
            assert!(dev < last);
            last = dev;
        }
        assert!(last < 0.01);
    }

    #[test]
    fn carlini_meissel_is_real_positive_on_unit_interval() {
        for &x in &[0.1, 0.5, 0.9, 0.999] {
            for &n in &[1i64, 7, 100] {
                let v = carlini_meissel(n, c(x, 0.0)).unwrap();
                assert!(v.phase().abs() < 1e-12);
                let p = AsymptoticParams::new(c(x, 0.0)).unwrap();
                assert!(p.w.im.abs() < 1e-15 && p.w.re > 0.0);
            }
        }
    }

    #[test]
    fn carlini_meissel_modulus_matches_omega() {
        // |exp(-n w)| = Omega(z)^n exactly, so the n-th root tends to Omega
        let z = c(0.0, 2.0);
        let omega = crate::height::omega_kapteyn(z);
        let v = carlini_meissel(1, z).unwrap();
        let quarter = (1.0f64 + 4.0).powf(0.25);
        let want = omega / ((2.0 * PI).sqrt() * quarter);
        assert!((v.abs() - want).abs() < 1e-13 * want);
        let v = carlini_meissel(2000, z).unwrap();
        assert!((v.root_abs(2000.0) / omega - 1.0).abs() < 0.01);
    }

    #[test]
    fn derivative_values() {
        assert_eq!(bessel_j_derivative(0, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(bessel_j_derivative(1, c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        let h = 1e-5;
        let z = c(1.5, 0.0);
        let fd = (bessel_j(2, z + h).unwrap() - bessel_j(2, z - h).unwrap()) / (2.0 * h);
        let d = bessel_j_derivative(2, z).unwrap();
        assert!((d - fd).norm() < 1e-7);
    }

    #[test]
    fn sequence_matches_single_orders() {
        for &z in &[c(0.7, 0.2), c(12.0, -3.0), c(-5.0, 20.0)] {
            let seq = j_sequence(30, z);
            for (k, v) in seq.iter().enumerate() {
                let o = oracle(k as u32, z).to_complex();
                assert!(rel(v.to_complex(), o) < 1e-10, "k={k} z={z}");
            }
        }
    }
}

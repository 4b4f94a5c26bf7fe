use crate::logcomplex::ldexp;
use crate::summation::CompensatedSum;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// `num / den` rounded to `f64`, both exact integers.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    // scale so the integer quotient carries at least 64 significant bits
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { (num >> (-shift) as u64) / den };
    ldexp(q.to_f64().unwrap_or(f64::INFINITY), -shift)
}

/// Coefficient of `e^n` in the Lagrange series of `E - M` for Kepler's
/// equation `E = M + e sin E`:
/// `1/(2^(n-1) n!) sum_{0<=k<=n/2} (-1)^k C(n,k) (n-2k)^(n-1) sin((n-2k)M)`.
///
/// The rational weights are exact; only the sines are rounded.
pub fn kepler_lagrange_coefficient(mean_anomaly: f64, n: u64) -> f64 {
    assert!(n >= 1, "Lagrange coefficients start at n = 1");
    let mut denominator = BigUint::one() << (n - 1);
    for k in 2..=n {
        denominator *= k;
    }
    let mut binom = BigUint::one();
    let mut sum = CompensatedSum::new();
    for k in 0..=n / 2 {
        if k > 0 {
            binom = binom * (n - k + 1) / k;
        }
        let m = n - 2 * k;
        if m > 0 {
            let weight = ratio_to_f64(&(&binom * BigUint::from(m).pow((n - 1) as u32)), &denominator);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum.add(Complex64::new(sign * weight * (m as f64 * mean_anomaly).sin(), 0.0));
        }
    }
    sum.value().re
}

/// Coefficient `2 sin(nM) / n` of `J_n(n e)` in Bessel's series for `E - M`.
pub fn kepler_kapteyn_coefficient(mean_anomaly: f64, n: u64) -> f64 {
    assert!(n >= 1, "Kapteyn coefficients start at n = 1");
    2.0 * (n as f64 * mean_anomaly).sin() / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        for &m in &[0.2, 1.0, 2.5, -0.7] {
            assert!((kepler_lagrange_coefficient(m, 1) - f64::sin(m)).abs() < 1e-15);
            assert!((kepler_lagrange_coefficient(m, 2) - f64::sin(2.0 * m) / 2.0).abs() < 1e-15);
            // e^3: (9 sin 3M - 3 sin M) / 24 = (3/8) sin 3M - (1/8) sin M
            let c3 = 0.375 * (3.0 * m).sin() - 0.125 * m.sin();
            assert!((kepler_lagrange_coefficient(m, 3) - c3).abs() < 1e-15);
        }
    }

    #[test]
    fn kapteyn_values() {
        assert!((kepler_kapteyn_coefficient(std::f64::consts::FRAC_PI_2, 1) - 2.0).abs() < 1e-15);
        for n in 1..50 {
            assert!(kepler_kapteyn_coefficient(std::f64::consts::PI, n).abs() < 1e-13);
        }
        assert!((kepler_kapteyn_coefficient(0.2, 25) - (-0.076_713_941_973_051_08)).abs() < 1e-15);
    }

    #[test]
    fn exact_ratio() {
        let third = ratio_to_f64(&BigUint::from(1u32), &BigUint::from(3u32));
        assert_eq!(third, 1.0 / 3.0);
        let big = BigUint::from(10u32).pow(400);
        assert_eq!(ratio_to_f64(&big, &(&big * 4u32)), 0.25);
    }
}

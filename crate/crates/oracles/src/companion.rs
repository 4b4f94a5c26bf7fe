use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots of `sum_k coeffs[k] * z^k` as eigenvalues of the companion matrix.
///
/// Trailing (highest-order) zero coefficients are dropped first.
pub fn polynomial_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let mut degree = coeffs.len().saturating_sub(1);
    while degree > 0 && coeffs[degree] == 0.0 {
        degree -= 1;
    }
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut m = DMatrix::<f64>::zeros(degree, degree);
    for i in 1..degree {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..degree {
        m[(i, degree - 1)] = -coeffs[i] / lead;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|c| Complex64::new(c.re, c.im))
        .collect()
}

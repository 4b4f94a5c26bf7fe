use super::{SeriesError, SeriesSpec};
use crate::bessel::{derivative_from_triplet, j_log, j_sequence, j_triplet};
use crate::family::Family;
use crate::logcomplex::LogComplex;
use crate::summation::ScaledSum;
use num_complex::Complex64;

/// A function that can be evaluated with its derivative, in log form.
pub trait Holomorphic: Sync {
    fn eval_log(&self, z: Complex64) -> LogComplex;

    fn eval_with_derivative(&self, z: Complex64) -> (LogComplex, LogComplex);

    fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_log(z).to_complex()
    }
}

/// Adapts a pair of closures `(f, f')` to [`Holomorphic`].
pub struct WithDerivative<F, G> {
    pub f: F,
    pub df: G,
}

impl<F, G> Holomorphic for WithDerivative<F, G>
where
    F: Fn(Complex64) -> Complex64 + Sync,
    G: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval_log(&self, z: Complex64) -> LogComplex {
        LogComplex::from_complex((self.f)(z))
    }

    fn eval_with_derivative(&self, z: Complex64) -> (LogComplex, LogComplex) {
        (LogComplex::from_complex((self.f)(z)), LogComplex::from_complex((self.df)(z)))
    }
}

/// The section `f_n(z) = sum_{k<=n} a_k phi_k(z)` with materialized
/// coefficients and exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    family: Family,
    coefficients: Vec<LogComplex>,
    exponents: Vec<f64>,
}

impl Section {
    pub(crate) fn new(spec: &SeriesSpec, n: usize) -> Result<Self, SeriesError> {
        spec.validate()?;
        let mut coefficients = Vec::with_capacity(n + 1);
        let mut exponents = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let a = spec.coefficient(k)?;
            let lambda = spec.exponent(k)?;
            if let Some(&previous) = exponents.last() {
                if !(lambda > previous) {
                    return Err(SeriesError::ExponentsNotIncreasing { index: k, previous, value: lambda });
                }
            }
            if lambda == f64::NEG_INFINITY && !a.is_zero() {
                return Err(SeriesError::InfiniteExponent(k));
            }
            coefficients.push(a);
            exponents.push(lambda);
        }
        Ok(Section { family: spec.family, coefficients, exponents })
    }

    /// A power-series section from explicit coefficients `a_0..a_n`.
    pub fn polynomial(coefficients: &[Complex64]) -> Self {
        Section {
            family: Family::Power,
            coefficients: coefficients.iter().map(|&a| LogComplex::from_complex(a)).collect(),
            exponents: (0..coefficients.len()).map(|k| k as f64).collect(),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Truncation index `n`.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[LogComplex] {
        &self.coefficients
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    /// The individual terms `a_k phi_k(z)`.
    pub fn terms_log(&self, z: Complex64) -> Vec<LogComplex> {
        let n = self.degree();
        let a = &self.coefficients;
        match self.family {
            Family::Power => {
                let zl = LogComplex::from_complex(z);
                let mut p = LogComplex::ONE;
                (0..=n)
                    .map(|k| {
                        if k > 0 {
                            p = p * zl;
                        }
                        a[k] * p
                    })
                    .collect()
            }
            Family::Dirichlet => (0..=n)
                .map(|k| if a[k].is_zero() { LogComplex::ZERO } else { a[k] * LogComplex::exp(-z * self.exponents[k]) })
                .collect(),
            Family::Neumann => j_sequence(n, z).into_iter().zip(a).map(|(j, &c)| c * j).collect(),
            Family::Kapteyn => (0..=n)
                .map(|k| {
                    if a[k].is_zero() {
                        LogComplex::ZERO
                    } else if k == 0 {
                        a[0]
                    } else {
                        a[k] * j_log(k, z * k as f64)
                    }
                })
                .collect(),
        }
    }

    fn derivative_terms_log(&self, z: Complex64) -> Vec<LogComplex> {
        let n = self.degree();
        let a = &self.coefficients;
        match self.family {
            Family::Power => {
                let zl = LogComplex::from_complex(z);
                let mut p = LogComplex::ONE;
                (0..=n)
                    .map(|k| {
                        if k == 0 {
                            return LogComplex::ZERO;
                        }
                        if k > 1 {
                            p = p * zl;
                        }
                        (a[k] * p).scale(k as f64)
                    })
                    .collect()
            }
            Family::Dirichlet => (0..=n)
                .map(|k| {
                    if a[k].is_zero() {
                        LogComplex::ZERO
                    } else {
                        let lambda = self.exponents[k];
                        (a[k] * LogComplex::exp(-z * lambda)).scale(-lambda)
                    }
                })
                .collect(),
            Family::Neumann => {
                let j = j_sequence(n + 1, z);
                (0..=n)
                    .map(|k| {
                        let d = if k == 0 { -j[1] } else { derivative_from_triplet(&[j[k - 1], j[k], j[k + 1]]) };
                        a[k] * d
                    })
                    .collect()
            }
            Family::Kapteyn => (0..=n)
                .map(|k| {
                    if k == 0 || a[k].is_zero() {
                        LogComplex::ZERO
                    } else {
                        let t = j_triplet(k, z * k as f64);
                        (a[k] * derivative_from_triplet(&t)).scale(k as f64)
                    }
                })
                .collect(),
        }
    }

    /// `f_n(z)`; overflow shows up as an infinite log-magnitude.
    pub fn eval_log(&self, z: Complex64) -> LogComplex {
        self.terms_log(z).into_iter().collect::<ScaledSum>().value()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_log(z).to_complex()
    }

    pub fn eval_with_derivative(&self, z: Complex64) -> (LogComplex, LogComplex) {
        let f = self.eval_log(z);
        let df = self.derivative_terms_log(z).into_iter().collect::<ScaledSum>().value();
        (f, df)
    }

    /// `f_0(z), ..., f_n(z)` from one pass over the terms.
    pub fn partial_sums_log(&self, z: Complex64) -> Vec<LogComplex> {
        let mut acc = ScaledSum::new();
        self.terms_log(z)
            .into_iter()
            .map(|t| {
                acc.add(t);
                acc.value()
            })
            .collect()
    }
}

impl Holomorphic for Section {
    fn eval_log(&self, z: Complex64) -> LogComplex {
        Section::eval_log(self, z)
    }

    fn eval_with_derivative(&self, z: Complex64) -> (LogComplex, LogComplex) {
        Section::eval_with_derivative(self, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Coefficients;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn geometric_power_section() {
        let s = SeriesSpec::power_geometric(1.0).section(3).unwrap();
        assert_eq!(s.eval(c(2.0, 0.0)), c(15.0, 0.0));
        let (_, d) = s.eval_with_derivative(c(2.0, 0.0));
        assert!((d.to_complex() - c(17.0, 0.0)).norm() < 1e-13);
        let sums: Vec<f64> = s.partial_sums_log(c(2.0, 0.0)).iter().map(|v| v.to_complex().re).collect();
        assert_eq!(sums, vec![1.0, 3.0, 7.0, 15.0]);
    }

    #[test]
    fn zeta_section() {
        let s = SeriesSpec::zeta().section(10).unwrap();
        let exact: f64 = (1..=10).map(|k| 1.0 / (k * k) as f64).sum();
        assert!((s.eval(c(2.0, 0.0)) - c(exact, 0.0)).norm() < 1e-15);
        assert!((exact - 1.549_767_731_166_540_7).abs() < 1e-15);
    }

    #[test]
    fn kapteyn_derivative_at_origin() {
        let spec = SeriesSpec::new(Family::Kapteyn, Coefficients::Explicit(vec![c(3.0, 0.0), c(0.7, -0.2), c(5.0, 1.0)]));
        let s = spec.section(2).unwrap();
        let (f, d) = s.eval_with_derivative(c(0.0, 0.0));
        assert_eq!(f.to_complex(), c(3.0, 0.0));
        assert!((d.to_complex() - c(0.35, -0.1)).norm() < 1e-15);
    }

    #[test]
    fn overflow_is_infinite_not_nan() {
        let s = SeriesSpec::power_geometric(1e300).section(4).unwrap();
        let v = s.eval_log(c(1e300, 0.0));
        assert!(v.log_mag().is_finite());
        assert!(v.log_mag() > 2000.0);
        assert!(v.to_complex().re.is_infinite());
    }

    #[test]
    fn rejects_bad_exponents() {
        let spec = SeriesSpec::new(Family::Dirichlet, Coefficients::Zeta)
            .with_exponents(crate::series::Exponents::Explicit(vec![0.0, 1.0, 1.0]));
        assert!(matches!(spec.section(2), Err(SeriesError::ExponentsNotIncreasing { index: 2, .. })));
        let spec = SeriesSpec::new(Family::Dirichlet, Coefficients::Geometric { ratio: c(1.0, 0.0) })
            .with_exponents(crate::series::Exponents::Log);
        assert_eq!(spec.section(3), Err(SeriesError::InfiniteExponent(0)));
    }
}

use super::{SeriesError, SeriesSpec};
use crate::family::Family;
use crate::logcomplex::LogComplex;
use crate::summation::ScaledSum;
use num_complex::Complex64;

const MIN_TERMS: usize = 32;

/// Estimate of the convergence level `rho` from the tail `[n_max/2, n_max]`
/// of the coefficient stream: `1/rho` is the largest value there of
/// `|a_n|^(1/n)` (power, Kapteyn) or `(e/2n)|a_n|^(1/n)` (Neumann), and
/// `rho = exp(-sigma_c)` for Dirichlet series.
///
/// A tail of zero coefficients gives `rho = +infinity`.
pub fn convergence_level(spec: &SeriesSpec, n_max: usize) -> Result<f64, SeriesError> {
    if n_max < MIN_TERMS {
        return Err(SeriesError::TooFewTerms { min: MIN_TERMS, got: n_max });
    }
    if spec.family == Family::Dirichlet {
        return Ok((-dirichlet_abscissa(spec, n_max)?).exp());
    }
    let mut log_inv = f64::NEG_INFINITY;
    for n in n_max / 2..=n_max {
        let a = spec.coefficient(n)?;
        if a.is_zero() {
            continue;
        }
        let nf = n as f64;
        let v = match spec.family {
            Family::Neumann => a.log_mag() / nf + 1.0 - (2.0 * nf).ln(),
            _ => a.log_mag() / nf,
        };
        log_inv = log_inv.max(v);
    }
    Ok((-log_inv).exp())
}

/// `sigma_c` itself. Cahen's estimate gives `max(0, sigma_c)`; a shift
/// `s0 < 0` gives `max(s0, sigma_c)`. When the shift by -1 already lands
/// below zero, the spec is shifted further left until the estimate sits
/// clearly above the shift.
fn dirichlet_abscissa(spec: &SeriesSpec, n_max: usize) -> Result<f64, SeriesError> {
    let probe = cahen_abscissa_shifted(spec, n_max, -1.0)?;
    if probe >= 0.0 {
        return cahen_abscissa(spec, n_max);
    }
    let mut shift: f64 = -1.0;
    let mut est = probe;
    while shift >= -64.0 {
        est = cahen_abscissa_shifted(spec, n_max, shift)?;
        if est > shift / 2.0 {
            break;
        }
        shift *= 2.0;
    }
    Ok(est)
}

fn tail_estimate<I: Iterator<Item = (f64, LogComplex)>>(terms: I, n_max: usize) -> Result<f64, SeriesError> {
    let mut acc = ScaledSum::new();
    let mut best = f64::NEG_INFINITY;
    let mut seen = false;
    for (n, (lambda, a)) in terms.enumerate() {
        acc.add(a);
        if n < n_max / 2 || !(lambda > 0.0) {
            continue;
        }
        let s = acc.value();
        if s.is_zero() {
            continue;
        }
        seen = true;
        best = best.max(s.log_mag() / lambda);
    }
    if !seen {
        return Err(SeriesError::UndefinedAbscissa);
    }
    Ok(best)
}

fn dirichlet_terms(spec: &SeriesSpec, n_max: usize) -> Result<Vec<(f64, LogComplex)>, SeriesError> {
    if spec.family != Family::Dirichlet {
        return Err(SeriesError::NotDirichlet(spec.family));
    }
    (0..=n_max).map(|n| Ok((spec.exponent(n)?, spec.coefficient(n)?))).collect()
}

/// Cahen's estimate `max_{n in [n_max/2, n_max]} log|f_n(0)| / lambda_n`
/// with `f_n(0) = a_0 + ... + a_n`.
///
/// This estimates `max(0, sigma_c)`, not `sigma_c`; see
/// [`cahen_abscissa_shifted`] for negative abscissae.
pub fn cahen_abscissa(spec: &SeriesSpec, n_max: usize) -> Result<f64, SeriesError> {
    tail_estimate(dirichlet_terms(spec, n_max)?.into_iter(), n_max)
}

/// Cahen's estimate for the coefficients `a_k exp(-lambda_k s0)`, shifted
/// back by `s0`: estimates `max(s0, sigma_c)`.
pub fn cahen_abscissa_shifted(spec: &SeriesSpec, n_max: usize, s0: f64) -> Result<f64, SeriesError> {
    let terms = dirichlet_terms(spec, n_max)?.into_iter().map(|(lambda, a)| {
        let shifted = if a.is_zero() { a } else { a * LogComplex::exp(Complex64::new(-lambda * s0, 0.0)) };
        (lambda, shifted)
    });
    Ok(tail_estimate(terms, n_max)? + s0)
}

/// Cahen's estimate applied to `|a_k|`, i.e. `max(0, sigma_a)`.
pub fn absolute_abscissa(spec: &SeriesSpec, n_max: usize) -> Result<f64, SeriesError> {
    let terms = dirichlet_terms(spec, n_max)?.into_iter().map(|(lambda, a)| (lambda, LogComplex::from_real(a.abs())));
    tail_estimate(terms, n_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Coefficients, Exponents};

    #[test]
    fn power_and_neumann_levels() {
        let rho = convergence_level(&SeriesSpec::power_geometric(2.0), 64).unwrap();
        assert!((rho - 0.5).abs() < 1e-6);
        let neumann = SeriesSpec::new(Family::Neumann, Coefficients::Geometric { ratio: Complex64::new(1.0, 0.0) })
            .with_level(5.0);
        let rho = convergence_level(&neumann, 400).unwrap();
        assert!((rho - 5.0).abs() < 0.25, "{rho}");
        let short = SeriesSpec::new(Family::Power, Coefficients::Explicit(vec![Complex64::new(1.0, 0.0); 1]));
        assert!(convergence_level(&short, 40).is_err());
        let mut a = vec![Complex64::new(0.0, 0.0); 41];
        a[3] = Complex64::new(1.0, 0.0);
        let finite = SeriesSpec::new(Family::Power, Coefficients::Explicit(a));
        assert_eq!(convergence_level(&finite, 40).unwrap(), f64::INFINITY);
        assert!(convergence_level(&SeriesSpec::power_geometric(2.0), 8).is_err());
    }

    #[test]
    fn kepler_levels() {
        let rho = convergence_level(&SeriesSpec::kepler_kapteyn(0.2), 400).unwrap();
        assert!((rho - 1.0).abs() < 0.05, "{rho}");
    }

    #[test]
    fn cahen_cases() {
        assert_eq!(cahen_abscissa(&SeriesSpec::zeta(), 1000).unwrap(), 1.0);
        let alt = SeriesSpec::new(
            Family::Dirichlet,
            Coefficients::Explicit((0..=200).map(|k| Complex64::new(if k == 0 { 0.0 } else if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)).collect()),
        )
        .with_exponents(Exponents::Log);
        assert_eq!(cahen_abscissa(&alt, 200).unwrap(), 0.0);
        let one = SeriesSpec::new(
            Family::Dirichlet,
            Coefficients::Explicit((0..=64).map(|k| Complex64::new(if k == 0 { 1.0 } else { 0.0 }, 0.0)).collect()),
        );
        assert_eq!(cahen_abscissa(&one, 64).unwrap(), 0.0);
        assert!(cahen_abscissa(&SeriesSpec::power_geometric(1.0), 64).is_err());
    }

    #[test]
    fn negative_abscissa_via_shift() {
        // a_k = 2^-k, lambda_k = k: sigma_c = -log 2
        let spec = SeriesSpec::new(Family::Dirichlet, Coefficients::Geometric { ratio: Complex64::new(0.5, 0.0) });
        // max(0, sigma_c) up to log(2) / lambda_32
        assert!((cahen_abscissa(&spec, 64).unwrap() - 2f64.ln() / 32.0).abs() < 1e-9);
        let rho = convergence_level(&spec, 64).unwrap();
        assert!((rho - 2.0).abs() < 0.1, "{rho}");
        assert!((absolute_abscissa(&SeriesSpec::zeta(), 1000).unwrap() - 1.0).abs() < 1e-12);
    }
}

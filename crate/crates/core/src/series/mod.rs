//! Series specifications, sections and convergence estimates.

mod config;
mod estimate;
mod kepler;
mod section;

pub use config::{format_complex, parse_complex, ConfigError};
pub use estimate::{absolute_abscissa, cahen_abscissa, cahen_abscissa_shifted, convergence_level};
pub use kepler::{kepler_kapteyn_coefficient, kepler_lagrange_coefficient};
pub use section::{Holomorphic, Section, WithDerivative};

use crate::family::Family;
use crate::logcomplex::LogComplex;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("exponents must strictly increase: lambda_{index} = {value} after {previous}")]
    ExponentsNotIncreasing { index: usize, previous: f64, value: f64 },
    #[error("exponent list has {have} entries, section needs {need}")]
    ExponentsTooShort { have: usize, need: usize },
    #[error("coefficient list has {have} entries, section needs {need}")]
    CoefficientsTooShort { have: usize, need: usize },
    #[error("coefficient a_{0} must vanish where the exponent is -infinity")]
    InfiniteExponent(usize),
    #[error("explicit exponents are only meaningful for dirichlet series")]
    ExponentsForNonDirichlet,
    #[error("n_max must be at least {min}, got {got}")]
    TooFewTerms { min: usize, got: usize },
    #[error("all partial sums in the tail window vanish; the abscissa estimate is undefined")]
    UndefinedAbscissa,
    #[error("cahen abscissa needs a dirichlet spec, got {0}")]
    NotDirichlet(Family),
    #[error("level must be positive and finite, got {0}")]
    InvalidLevel(f64),
}

/// Closed-form or explicit coefficient streams.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    /// `a_n = ratio^n`
    Geometric { ratio: Complex64 },
    /// Power series in the eccentricity for `E - M` of Kepler's equation.
    KeplerLagrange { mean_anomaly: f64 },
    /// `a_n = 2 sin(nM) / n`, `a_0 = 0`
    KeplerKapteyn { mean_anomaly: f64 },
    /// `a_0 = 0`, `a_n = 1`
    Zeta,
    /// Independent draws with real and imaginary parts uniform in `[-1, 1)`
    /// (imaginary part zero when `real`). Each index has its own ChaCha
    /// stream, so `a_n` does not depend on how many terms were drawn.
    RandomUniform { seed: u64, real: bool },
    Explicit(Vec<Complex64>),
}

/// Exponent streams `lambda_n` of a Dirichlet series.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponents {
    /// `lambda_n = n`
    Natural,
    /// `lambda_n = log n`, with `lambda_0 = -infinity`
    Log,
    Explicit(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub family: Family,
    pub coefficients: Coefficients,
    /// Only used by Dirichlet series; the other families have `lambda_n = n`.
    pub exponents: Exponents,
    /// When set, `a_n` is multiplied by the factor that turns a stream with
    /// unit limsup into one with this convergence level: `level^-n` for power
    /// and Kapteyn series, `(2n/e)^n level^-n` for Neumann series and
    /// `level^-lambda_n` for Dirichlet series.
    pub level: Option<f64>,
}

impl SeriesSpec {
    pub fn new(family: Family, coefficients: Coefficients) -> Self {
        let exponents = match (&family, &coefficients) {
            (Family::Dirichlet, Coefficients::Zeta) => Exponents::Log,
            _ => Exponents::Natural,
        };
        SeriesSpec { family, coefficients, exponents, level: None }
    }

    pub fn with_exponents(mut self, exponents: Exponents) -> Self {
        self.exponents = exponents;
        self
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = Some(level);
        self
    }

    pub fn power_geometric(ratio: f64) -> Self {
        Self::new(Family::Power, Coefficients::Geometric { ratio: Complex64::new(ratio, 0.0) })
    }

    pub fn zeta() -> Self {
        Self::new(Family::Dirichlet, Coefficients::Zeta)
    }

    pub fn kepler_lagrange(mean_anomaly: f64) -> Self {
        Self::new(Family::Power, Coefficients::KeplerLagrange { mean_anomaly })
    }

    pub fn kepler_kapteyn(mean_anomaly: f64) -> Self {
        Self::new(Family::Kapteyn, Coefficients::KeplerKapteyn { mean_anomaly })
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        if self.family != Family::Dirichlet && self.exponents != Exponents::Natural {
            return Err(SeriesError::ExponentsForNonDirichlet);
        }
        if let Some(level) = self.level {
            if !(level.is_finite() && level > 0.0) {
                return Err(SeriesError::InvalidLevel(level));
            }
        }
        Ok(())
    }

    /// Growth exponent `lambda_n`.
    pub fn exponent(&self, n: usize) -> Result<f64, SeriesError> {
        if self.family != Family::Dirichlet {
            return Ok(n as f64);
        }
        Ok(match &self.exponents {
            Exponents::Natural => n as f64,
            Exponents::Log => {
                if n == 0 {
                    f64::NEG_INFINITY
                } else {
                    (n as f64).ln()
                }
            }
            Exponents::Explicit(v) => *v
                .get(n)
                .ok_or(SeriesError::ExponentsTooShort { have: v.len(), need: n + 1 })?,
        })
    }

    fn raw_coefficient(&self, n: usize) -> Result<Complex64, SeriesError> {
        Ok(match &self.coefficients {
            Coefficients::Geometric { ratio } => ratio.powu(n as u32),
            Coefficients::KeplerLagrange { mean_anomaly } => {
                Complex64::new(if n == 0 { 0.0 } else { kepler_lagrange_coefficient(*mean_anomaly, n as u64) }, 0.0)
            }
            Coefficients::KeplerKapteyn { mean_anomaly } => {
                Complex64::new(if n == 0 { 0.0 } else { kepler_kapteyn_coefficient(*mean_anomaly, n as u64) }, 0.0)
            }
            Coefficients::Zeta => Complex64::new(if n == 0 { 0.0 } else { 1.0 }, 0.0),
            Coefficients::RandomUniform { seed, real } => random_uniform(*seed, n, *real),
            Coefficients::Explicit(v) => {
                *v.get(n).ok_or(SeriesError::CoefficientsTooShort { have: v.len(), need: n + 1 })?
            }
        })
    }

    /// Coefficient `a_n`, in log form since level scaling can leave the
    /// `f64` range.
    pub fn coefficient(&self, n: usize) -> Result<LogComplex, SeriesError> {
        let base = match &self.coefficients {
            Coefficients::Geometric { ratio } => LogComplex::from_complex(*ratio).powu(n as u64),
            _ => LogComplex::from_complex(self.raw_coefficient(n)?),
        };
        let Some(level) = self.level else { return Ok(base) };
        let nf = n as f64;
        let log_factor = match self.family {
            Family::Power | Family::Kapteyn => -nf * level.ln(),
            Family::Neumann => {
                if n == 0 {
                    0.0
                } else {
                    nf * ((2.0 * nf).ln() - 1.0 - level.ln())
                }
            }
            Family::Dirichlet => {
                let lambda = self.exponent(n)?;
                if base.is_zero() || !lambda.is_finite() {
                    return Ok(base);
                }
                -lambda * level.ln()
            }
        };
        Ok(base * LogComplex::from_polar(log_factor, 0.0))
    }

    /// Materializes `a_0..=a_n` and `lambda_0..=lambda_n`.
    pub fn section(&self, n: usize) -> Result<Section, SeriesError> {
        Section::new(self, n)
    }

    pub fn has_real_coefficients(&self) -> bool {
        match &self.coefficients {
            Coefficients::Geometric { ratio } => ratio.im == 0.0,
            Coefficients::RandomUniform { real, .. } => *real,
            Coefficients::Explicit(v) => v.iter().all(|a| a.im == 0.0),
            _ => true,
        }
    }
}

fn random_uniform(seed: u64, n: usize, real: bool) -> Complex64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(n as u64);
    let re = rng.random_range(-1.0..1.0);
    let im = if real { 0.0 } else { rng.random_range(-1.0..1.0) };
    Complex64::new(re, im)
}

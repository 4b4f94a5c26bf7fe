//! Growth function estimates `mu(z) = limsup |f_n(z)|^(1/lambda_n)` and
//! their comparison with `max(1, omega(z) / rho)`.

use crate::family::Family;
use crate::height::{distance_to_branch_set, height};
use crate::par;
use crate::series::{convergence_level, Coefficients, Exponents, Section, SeriesError, SeriesSpec};
use crate::window::WindowBox;
use num_complex::Complex64;
use std::fmt;
use std::ops::RangeInclusive;
use thiserror::Error;

const MIN_TERMS: usize = 64;
const BRANCH_EXCLUSION: f64 = 1e-9;
const VANISHING: f64 = 1e-12;
const NEAR_BOUNDARY: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowthError {
    #[error("n_max must be at least {MIN_TERMS}, got {0}")]
    TooFewTerms(usize),
    #[error("grid must have at least one point per side")]
    EmptyGrid,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GrowthFlag {
    /// The prediction applies.
    Match,
    /// On the branch set of a Kapteyn series, or `f_n(z)` numerically zero
    /// across the whole tail.
    ExcludedExceptional,
    /// `omega(z) / rho` within 10% of 1, where convergence is slow.
    NearBoundary,
}

impl GrowthFlag {
    pub fn name(self) -> &'static str {
        match self {
            GrowthFlag::Match => "match",
            GrowthFlag::ExcludedExceptional => "excluded-exceptional",
            GrowthFlag::NearBoundary => "near-boundary",
        }
    }
}

impl fmt::Display for GrowthFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthEstimate {
    pub z: Complex64,
    pub mu_hat: f64,
    pub window: RangeInclusive<usize>,
    pub predicted: f64,
    pub flag: GrowthFlag,
}

impl GrowthEstimate {
    pub fn relative_error(&self) -> f64 {
        (self.mu_hat - self.predicted).abs() / self.predicted
    }

    /// One whitespace-separated record: `re im mu_hat predicted flag`.
    pub fn record(&self) -> String {
        format!("{} {} {} {} {}", self.z.re, self.z.im, self.mu_hat, self.predicted, self.flag)
    }
}

/// A spec with its materialized tail section and convergence level, ready
/// to be probed at many points.
#[derive(Clone, Debug)]
pub struct GrowthProbe {
    family: Family,
    section: Section,
    n_max: usize,
    rho: f64,
}

impl GrowthProbe {
    pub fn new(spec: &SeriesSpec, n_max: usize) -> Result<Self, GrowthError> {
        if n_max < MIN_TERMS {
            return Err(GrowthError::TooFewTerms(n_max));
        }
        let rho = convergence_level(spec, n_max)?;
        Self::with_level(spec, n_max, rho)
    }

    /// Uses a known convergence level instead of estimating it.
    pub fn with_level(spec: &SeriesSpec, n_max: usize, rho: f64) -> Result<Self, GrowthError> {
        if n_max < MIN_TERMS {
            return Err(GrowthError::TooFewTerms(n_max));
        }
        Ok(GrowthProbe { family: spec.family, section: spec.section(n_max)?, n_max, rho })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn window(&self) -> RangeInclusive<usize> {
        self.n_max / 2..=self.n_max
    }

    pub fn predicted(&self, z: Complex64) -> f64 {
        (height(self.family, z) / self.rho).max(1.0)
    }

    pub fn estimate(&self, z: Complex64) -> GrowthEstimate {
        let sums = self.section.partial_sums_log(z);
        let lambdas = self.section.exponents();
        let mut log_mu = f64::NEG_INFINITY;
        let mut vanishing = true;
        for n in self.window() {
            let lambda = lambdas[n];
            let log_f = sums[n].log_mag();
            if log_f > VANISHING.ln() {
                vanishing = false;
            }
            if lambda > 0.0 {
                log_mu = log_mu.max(log_f / lambda);
            }
        }
        let ratio = height(self.family, z) / self.rho;
        let on_branch = self.family == Family::Kapteyn && distance_to_branch_set(z) < BRANCH_EXCLUSION;
        let flag = if on_branch || vanishing {
            GrowthFlag::ExcludedExceptional
        } else if (ratio - 1.0).abs() < NEAR_BOUNDARY {
            GrowthFlag::NearBoundary
        } else {
            GrowthFlag::Match
        };
        GrowthEstimate { z, mu_hat: log_mu.exp(), window: self.window(), predicted: ratio.max(1.0), flag }
    }

    /// Estimates at every point, in input order.
    pub fn sweep(&self, points: &[Complex64]) -> Vec<GrowthEstimate> {
        par::map_slice(points, |&z| self.estimate(z))
    }

    /// Estimates at the `nx x ny` pixel centers of `window`.
    pub fn sweep_grid(&self, window: &WindowBox, nx: usize, ny: usize) -> Result<Vec<GrowthEstimate>, GrowthError> {
        if nx == 0 || ny == 0 {
            return Err(GrowthError::EmptyGrid);
        }
        Ok(self.sweep(&window.pixel_centers(nx, ny)))
    }
}

/// `mu_hat` and the prediction at `z`, estimating `rho` from the spec.
pub fn growth_estimate(spec: &SeriesSpec, z: Complex64, n_max: usize) -> Result<GrowthEstimate, GrowthError> {
    Ok(GrowthProbe::new(spec, n_max)?.estimate(z))
}

/// Growth-sweep report: a header line followed by one record per point.
pub fn format_sweep(estimates: &[GrowthEstimate]) -> String {
    let mut out = String::from("# re im mu_hat predicted flag\n");
    for e in estimates {
        out.push_str(&e.record());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum Admissibility {
    Bounded { bound: f64, observed: f64 },
    Violation { bound: f64, observed: f64, z: Complex64, n: usize },
}

impl Admissibility {
    pub fn holds(&self) -> bool {
        matches!(self, Admissibility::Bounded { .. })
    }
}

/// The spec with `a_k` replaced by `|a_k|`.
fn absolute_spec(spec: &SeriesSpec, n_max: usize) -> Result<SeriesSpec, SeriesError> {
    let coefficients = (0..=n_max).map(|k| Ok(Complex64::new(spec.coefficient(k)?.abs(), 0.0))).collect::<Result<Vec<_>, SeriesError>>()?;
    let mut out = SeriesSpec::new(spec.family, Coefficients::Explicit(coefficients));
    if spec.family == Family::Dirichlet {
        let exps = (0..=n_max).map(|k| spec.exponent(k)).collect::<Result<Vec<_>, _>>()?;
        out = out.with_exponents(Exponents::Explicit(exps));
    }
    Ok(out)
}

/// Checks `max_z |f_n(z)|^(1/lambda_n) <= eta + max(1, R/rho_a) + 0.1` over
/// the grid and the tail window, with `R` the largest height on the grid,
/// `rho_a` the level of the `|a_k|` series, and `eta = 1` for Dirichlet
/// series (0 otherwise).
pub fn admissibility_check(
    spec: &SeriesSpec,
    window: &WindowBox,
    n_max: usize,
    grid: usize,
) -> Result<Admissibility, GrowthError> {
    if n_max < MIN_TERMS {
        return Err(GrowthError::TooFewTerms(n_max));
    }
    if grid == 0 {
        return Err(GrowthError::EmptyGrid);
    }
    let rho_a = convergence_level(&absolute_spec(spec, n_max)?, n_max)?;
    let points = window.pixel_centers(grid, grid);
    let r = points.iter().map(|&z| height(spec.family, z)).fold(0.0, f64::max);
    let eta = if spec.family == Family::Dirichlet { 1.0 } else { 0.0 };
    let bound = eta + (r / rho_a).max(1.0) + 0.1;

    let section = spec.section(n_max)?;
    let lambdas = section.exponents().to_vec();
    let per_point = par::map_slice(&points, |&z| {
        let sums = section.partial_sums_log(z);
        let mut worst = (f64::NEG_INFINITY, 0usize);
        for n in n_max / 2..=n_max {
            if lambdas[n] > 0.0 {
                let v = (sums[n].log_mag() / lambdas[n]).exp();
                if v > worst.0 {
                    worst = (v, n);
                }
            }
        }
        (z, worst)
    });
    let (z, (observed, n)) = per_point
        .into_iter()
        .fold((Complex64::new(0.0, 0.0), (f64::NEG_INFINITY, 0)), |best, cur| if cur.1 .0 > best.1 .0 { cur } else { best });
    if observed <= bound {
        Ok(Admissibility::Bounded { bound, observed })
    } else {
        Ok(Admissibility::Violation { bound, observed, z, n })
    }
}

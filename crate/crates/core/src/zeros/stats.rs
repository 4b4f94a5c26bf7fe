use super::{find_zeros, ZeroError, ZeroReport, DEFAULT_MAX_DEPTH};
use crate::family::Family;
use crate::height::BoundaryPolyline;
use crate::logcomplex::wrap_phase;
use crate::series::{Holomorphic, Section};
use crate::window::WindowBox;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Distances from boundary vertices to their nearest zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusteringStats {
    /// Largest distance; `+infinity` when there are no zeros.
    pub covering_radius: f64,
    pub mean: f64,
    pub distances: Vec<f64>,
}

pub fn clustering_stats(zeros: &[Complex64], boundary: &BoundaryPolyline) -> ClusteringStats {
    let distances: Vec<f64> = boundary
        .points
        .iter()
        .map(|&v| zeros.iter().map(|&z| (z - v).norm()).fold(f64::INFINITY, f64::min))
        .collect();
    let covering_radius = distances.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mean = distances.iter().sum::<f64>() / distances.len() as f64;
    ClusteringStats { covering_radius: covering_radius.max(0.0), mean, distances }
}

/// The circle `|z| = radius` sampled at `m` equally spaced vertices.
pub fn circle_boundary(radius: f64, m: usize) -> BoundaryPolyline {
    BoundaryPolyline {
        level: radius,
        points: (0..m).map(|k| Complex64::from_polar(radius, TAU * k as f64 / m as f64)).collect(),
        closed: true,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectorDensity {
    pub theta: f64,
    pub delta: f64,
    pub r_values: Vec<f64>,
    /// `N(r; theta - delta, theta + delta)` for each `r`.
    pub counts: Vec<u32>,
    /// Least-squares slope of `counts` against `r_values`.
    pub slope: f64,
    /// Slopes for `(theta - delta, theta)` and `[theta, theta + delta)`.
    pub flank_slopes: (f64, f64),
    pub report: ZeroReport,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorOptions {
    pub max_depth: usize,
    /// The searched box is the sector's bounding box grown by this fraction
    /// of the largest radius, keeping the apex off the contour.
    pub padding: f64,
}

impl Default for SectorOptions {
    fn default() -> Self {
        SectorOptions { max_depth: DEFAULT_MAX_DEPTH, padding: 0.01 }
    }
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

fn sector_box(theta: f64, delta: f64, r: f64, padding: f64) -> Result<WindowBox, ZeroError> {
    let mut pts = vec![Complex64::new(0.0, 0.0), Complex64::from_polar(r, theta - delta), Complex64::from_polar(r, theta + delta)];
    // axis directions inside the arc extend the bounding box
    let first = ((theta - delta) / FRAC_PI_2).ceil() as i64;
    let last = ((theta + delta) / FRAC_PI_2).floor() as i64;
    for k in first..=last {
        pts.push(Complex64::from_polar(r, k as f64 * FRAC_PI_2));
    }
    let pad = padding * r;
    let lo_re = pts.iter().map(|p| p.re).fold(f64::INFINITY, f64::min) - pad;
    let lo_im = pts.iter().map(|p| p.im).fold(f64::INFINITY, f64::min) - pad;
    let hi_re = pts.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max) + pad;
    let hi_im = pts.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max) + pad;
    WindowBox::from_bounds(lo_re, lo_im, hi_re, hi_im).map_err(|_| ZeroError::InvalidSector("degenerate bounding box"))
}

/// Zero counts of `f` in the sectors `|z| < r`, `|arg z - theta| < delta`.
///
/// Zeros are located in the padded bounding box of the largest sector and
/// then clipped by radius and angle. The apex `z = 0` belongs to no sector.
pub fn sector_density<F: Holomorphic + ?Sized>(
    f: &F,
    theta: f64,
    delta: f64,
    r_values: &[f64],
    options: SectorOptions,
) -> Result<SectorDensity, ZeroError> {
    if !(delta > 0.0 && delta < PI) {
        return Err(ZeroError::InvalidSector("delta must lie in (0, pi)"));
    }
    if r_values.len() < 2 || r_values.windows(2).any(|w| !(w[1] > w[0])) || !(r_values[0] > 0.0) {
        return Err(ZeroError::InvalidSector("radii must be positive and strictly increasing, at least two"));
    }
    let r_max = *r_values.last().unwrap_or(&1.0);
    let window = sector_box(theta, delta, r_max, options.padding)?;
    let report = find_zeros(f, &window, options.max_depth)?;
    let angle = |z: Complex64| wrap_phase(z.arg() - theta);
    let apex = 1e-12 * r_max;
    let count = |r: f64, lo: f64, hi: f64| {
        report.count_where(|z| {
            let d = angle(z);
            z.norm() > apex && z.norm() < r && d > lo && d < hi
        })
    };
    let counts: Vec<u32> = r_values.iter().map(|&r| count(r, -delta, delta)).collect();
    let left: Vec<f64> = r_values.iter().map(|&r| count(r, -delta, 0.0) as f64).collect();
    let right: Vec<f64> = r_values.iter().map(|&r| count(r, -1e-300, delta) as f64).collect();
    let y: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    Ok(SectorDensity {
        theta,
        delta,
        r_values: r_values.to_vec(),
        slope: least_squares_slope(r_values, &y),
        flank_slopes: (least_squares_slope(r_values, &left), least_squares_slope(r_values, &right)),
        counts,
        report,
    })
}

fn on_lattice(theta: f64, offset: f64) -> bool {
    let t = (theta - offset) / PI;
    (t - t.round()).abs() < 1e-9
}

/// Predicted linear zero density `lim N(r; theta - delta, theta + delta) / r`
/// of a section for small `delta`: `n'/pi` on the real axis for Kapteyn
/// sections, `1/pi` there for Neumann sections, `(lambda_n' - lambda_n0) /
/// (2 pi)` on the imaginary axis for Dirichlet sections (`n0`, `n'` the
/// first and last nonzero coefficients), and zero elsewhere and for
/// polynomials.
pub fn predicted_density(section: &Section, theta: f64) -> f64 {
    let nonzero: Vec<usize> = section.coefficients().iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(k, _)| k).collect();
    let (Some(&n0), Some(&n1)) = (nonzero.first(), nonzero.last()) else { return 0.0 };
    match section.family() {
        Family::Kapteyn if on_lattice(theta, 0.0) => n1 as f64 / PI,
        Family::Neumann if on_lattice(theta, 0.0) && n1 > 0 => 1.0 / PI,
        Family::Dirichlet if on_lattice(theta, FRAC_PI_2) => {
            let l = section.exponents();
            (l[n1] - l[n0]) / TAU
        }
        _ => 0.0,
    }
}

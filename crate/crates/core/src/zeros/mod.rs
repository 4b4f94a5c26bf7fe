//! Zeros of sections in rectangular windows: argument-principle counts,
//! quadtree subdivision, Newton polishing, and the statistics built on them.

mod report;
mod stats;
mod winding;

pub use report::{ParseReportError, UnresolvedBox, Zero, ZeroReport, REPORT_VERSION};
pub use stats::{
    circle_boundary, clustering_stats, predicted_density, sector_density, ClusteringStats, SectorDensity, SectorOptions,
};
pub use winding::winding_count;

use crate::par;
use crate::series::Holomorphic;
use crate::window::WindowBox;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    #[error("zero on or numerically on the contour near {0}")]
    BoundaryZero(Complex64),
    #[error("winding sum {0} is not close to an integer")]
    NonIntegralWinding(f64),
    #[error("outer window still has a boundary zero after {0} inflations")]
    InflationExhausted(usize),
    #[error("negative winding count {0}: function is not holomorphic in the window")]
    NegativeWinding(i64),
    #[error("invalid sector: {0}")]
    InvalidSector(&'static str),
}

pub const DEFAULT_MAX_DEPTH: usize = 40;
const INFLATION: f64 = 1.0 + 1.0 / 1_048_576.0;
const MAX_INFLATIONS: usize = 8;
const DEDUP: f64 = 1e-8;
const NEWTON_ITER: usize = 80;
/// Split fractions tried in order; off-center so that subdivision lines of
/// symmetric windows avoid the symmetry axes, where real sections have zeros.
const SPLITS: [(f64, f64); 6] = [
    (0.487_304_687_5, 0.512_695_312_5),
    (0.512_695_312_5, 0.487_304_687_5),
    (0.453_125, 0.541_015_625),
    (0.541_015_625, 0.453_125),
    (0.423_828_125, 0.568_359_375),
    (0.568_359_375, 0.423_828_125),
];

/// Newton from `start`; returns the last iterate and whether it converged.
pub(crate) fn newton<F: Holomorphic + ?Sized>(f: &F, start: Complex64) -> (Complex64, bool) {
    let mut z = start;
    let mut last = f64::INFINITY;
    for _ in 0..NEWTON_ITER {
        let (v, d) = f.eval_with_derivative(z);
        if v.is_zero() {
            return (z, true);
        }
        if d.is_zero() || !d.is_finite() || !v.is_finite() {
            return (z, false);
        }
        let step = (v / d).to_complex();
        if !step.is_finite() || step.norm() > 1e8 * (1.0 + start.norm()) {
            return (z, false);
        }
        z -= step;
        last = step.norm();
        if last <= 1e-15 * z.norm().max(1.0) {
            return (z, true);
        }
    }
    // iterates circling at roundoff level
    (z, last <= 1e-12 * z.norm().max(1.0))
}

struct Search<'a, F: ?Sized> {
    f: &'a F,
    max_depth: usize,
    dedup: f64,
}

#[derive(Default)]
struct Found {
    zeros: Vec<(Complex64, u32)>,
    unresolved: Vec<UnresolvedBox>,
    resolved: usize,
}

impl Found {
    fn merge(mut self, other: Found) -> Found {
        self.zeros.extend(other.zeros);
        self.unresolved.extend(other.unresolved);
        self.resolved += other.resolved;
        self
    }
}

impl<F: Holomorphic + ?Sized> Search<'_, F> {
    /// Children of `b` with their winding counts, for the first split whose
    /// counts are defined and add up to `count`.
    fn split(&self, b: &WindowBox, count: i64) -> Option<Vec<(WindowBox, i64)>> {
        for &(fx, fy) in &SPLITS {
            let kids = b.split(fx, fy);
            let counts: Vec<Result<i64, ZeroError>> = par::map_slice(&kids, |k| winding_count(self.f, k));
            if counts.iter().any(|c| c.is_err()) {
                continue;
            }
            let counts: Vec<i64> = counts.into_iter().map(|c| c.unwrap_or(0)).collect();
            if counts.iter().any(|&c| c < 0) || counts.iter().sum::<i64>() != count {
                continue;
            }
            return Some(kids.into_iter().zip(counts).collect());
        }
        None
    }

    fn polish_single(&self, b: &WindowBox) -> Option<Complex64> {
        let (z, ok) = newton(self.f, b.center());
        let slack = 1e-9 * b.diagonal();
        let inside = z.re >= b.lo().re - slack
            && z.re <= b.hi().re + slack
            && z.im >= b.lo().im - slack
            && z.im <= b.hi().im + slack;
        (ok && inside).then_some(z)
    }

    fn resolve(&self, b: WindowBox, count: i64, depth: usize) -> Found {
        if count == 0 {
            return Found::default();
        }
        if count == 1 {
            if let Some(z) = self.polish_single(&b) {
                return Found { zeros: vec![(z, 1)], unresolved: Vec::new(), resolved: 1 };
            }
        }
        if depth >= self.max_depth {
            let (z, _) = newton(self.f, b.center());
            let z = if b.inflate(2.0).contains(z) { z } else { b.center() };
            return Found {
                zeros: vec![(z, count as u32)],
                unresolved: vec![UnresolvedBox { window: b, count }],
                resolved: 0,
            };
        }
        let Some(children) = self.split(&b, count) else {
            let (z, _) = newton(self.f, b.center());
            return Found {
                zeros: vec![(if b.contains(z) { z } else { b.center() }, count as u32)],
                unresolved: vec![UnresolvedBox { window: b, count }],
                resolved: 0,
            };
        };
        let parts: Vec<Found> = par::map_slice(&children, |&(k, c)| self.resolve(k, c, depth + 1));
        parts.into_iter().fold(Found::default(), Found::merge)
    }
}

/// Merges zeros closer than `tol`, adding multiplicities, and sorts by
/// `(re, im)`.
fn dedup_sorted(mut zeros: Vec<(Complex64, u32)>, tol: f64) -> Vec<(Complex64, u32)> {
    zeros.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut out: Vec<(Complex64, u32)> = Vec::with_capacity(zeros.len());
    for (z, m) in zeros {
        if let Some(existing) = out.iter_mut().rev().take_while(|e| z.re - e.0.re <= tol).find(|e| (e.0 - z).norm() <= tol) {
            existing.1 += m;
        } else {
            out.push((z, m));
        }
    }
    out
}

/// All zeros of `f` in `window`.
///
/// If a zero sits on the outer contour the window is inflated about its
/// center by `1 + 2^-20`, up to 8 times; the report carries the window
/// actually used.
pub fn find_zeros<F: Holomorphic + ?Sized>(f: &F, window: &WindowBox, max_depth: usize) -> Result<ZeroReport, ZeroError> {
    let mut outer = *window;
    let mut total = None;
    for _ in 0..=MAX_INFLATIONS {
        match winding_count(f, &outer) {
            Ok(n) => {
                total = Some(n);
                break;
            }
            Err(ZeroError::BoundaryZero(_)) => outer = outer.inflate(INFLATION),
            Err(e) => return Err(e),
        }
    }
    let total = total.ok_or(ZeroError::InflationExhausted(MAX_INFLATIONS))?;
    if total < 0 {
        return Err(ZeroError::NegativeWinding(total));
    }
    let search = Search { f, max_depth, dedup: DEDUP * outer.diagonal() };
    let found = search.resolve(outer, total, 0);
    let mut unresolved = found.unresolved;
    unresolved.sort_by(|a, b| {
        (a.window.lo().re, a.window.lo().im).partial_cmp(&(b.window.lo().re, b.window.lo().im)).unwrap_or(std::cmp::Ordering::Equal)
    });
    let zeros = dedup_sorted(found.zeros, search.dedup)
        .into_iter()
        .map(|(z, multiplicity)| Zero { z, residual: f.eval_log(z).abs(), multiplicity })
        .collect();
    Ok(ZeroReport {
        label: String::new(),
        window: outer,
        total_winding: total,
        boxes_resolved: found.resolved,
        zeros,
        unresolved,
    })
}

/// Largest `|f|` on a circle of radius `radius` around `z`; the scale the
/// residual of a polished zero is measured against.
pub fn local_scale<F: Holomorphic + ?Sized>(f: &F, z: Complex64, radius: f64) -> f64 {
    (0..16)
        .map(|k| f.eval_log(z + Complex64::from_polar(radius, k as f64 * std::f64::consts::TAU / 16.0)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{Section, SeriesSpec, WithDerivative};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_of_unity() {
        let s = SeriesSpec::power_geometric(1.0).section(10).unwrap();
        let r = find_zeros(&s, &WindowBox::square(2.0).unwrap(), DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(r.total_winding, 10);
        assert_eq!(r.zeros.len(), 10);
        assert!(r.unresolved.is_empty());
        for k in 1..=10 {
            let w = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 11.0);
            assert!(r.zeros.iter().any(|z| (z.z - w).norm() < 1e-10), "missing {w}");
        }
        let sorted = r.zeros.windows(2).all(|p| (p[0].z.re, p[0].z.im) <= (p[1].z.re, p[1].z.im));
        assert!(sorted);
    }

    #[test]
    fn double_zero_is_a_cluster() {
        // (z - 0.3)^2 (z + 0.7i)
        let s = Section::polynomial(&[c(0.0, 0.063), c(0.09, -0.42), c(-0.6, 0.7), c(1.0, 0.0)]);
        let r = find_zeros(&s, &WindowBox::square(2.0).unwrap(), 30).unwrap();
        assert_eq!(r.total_winding, 3);
        assert_eq!(r.zeros.iter().map(|z| z.multiplicity).sum::<u32>(), 3);
        assert!(r.zeros.iter().any(|z| (z.z - c(0.0, -0.7)).norm() < 1e-10));
        assert!(r.zeros.iter().any(|z| (z.z - c(0.3, 0.0)).norm() < 1e-6));
    }

    #[test]
    fn boundary_zero_triggers_inflation() {
        let f = WithDerivative { f: |z: Complex64| z - c(1.0, 0.2), df: |_z: Complex64| c(1.0, 0.0) };
        let r = find_zeros(&f, &WindowBox::square(1.0).unwrap(), 40).unwrap();
        assert!(r.window.hi().re > 1.0);
        assert_eq!(r.total_winding, 1);
        assert!((r.zeros[0].z - c(1.0, 0.2)).norm() < 1e-14);
    }

    #[test]
    fn no_zeros() {
        let f = WithDerivative { f: |z: Complex64| z.exp(), df: |z: Complex64| z.exp() };
        let r = find_zeros(&f, &WindowBox::square(3.0).unwrap(), 40).unwrap();
        assert_eq!(r.total_winding, 0);
        assert!(r.zeros.is_empty());
    }

    #[test]
    fn dedup_merges_close_pairs() {
        let z = dedup_sorted(vec![(c(1.0, 0.0), 1), (c(0.0, 0.0), 1), (c(1.0 + 1e-12, 0.0), 2)], 1e-9);
        assert_eq!(z, vec![(c(0.0, 0.0), 1), (c(1.0, 0.0), 3)]);
    }
}

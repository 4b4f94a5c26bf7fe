//! Proper height functions, their sublevel boundaries, and the Lagrange
//! series convergence radius for Kepler's equation.

mod contour;
mod radius;

pub use contour::{trace_boundary, trace_level_set, BoundaryPolyline, ContourError};
pub use radius::{lagrange_radius, RadiusError};

use crate::family::Family;
use num_complex::Complex64;

/// Imaginary parts below this count as lying on the real axis for `Omega`.
const ON_AXIS: f64 = 1e-12;

/// `Omega(z) = |z exp(sqrt(1 - z^2)) / (1 + sqrt(1 - z^2))|` with the
/// principal square root, and `Omega = 1` on `S = {x real : |x| >= 1}`.
pub fn omega_kapteyn(z: Complex64) -> f64 {
    if z.im.abs() < ON_AXIS && z.re.abs() >= 1.0 {
        return 1.0;
    }
    let s = (Complex64::new(1.0, 0.0) - z * z).sqrt();
    // Re s >= 0 on the principal branch, so |1 + s| >= 1
    z.norm() * s.re.exp() / (s + 1.0).norm()
}

/// Distance from `z` to `S = {x real : |x| >= 1}`.
pub fn distance_to_branch_set(z: Complex64) -> f64 {
    if z.re.abs() >= 1.0 {
        z.im.abs()
    } else {
        (1.0 - z.re.abs()).hypot(z.im)
    }
}

/// The family's height function: `exp(-Re z)` for Dirichlet series, `|z|`
/// for power and Neumann series, `Omega(z)` for Kapteyn series.
pub fn height(family: Family, z: Complex64) -> f64 {
    match family {
        Family::Dirichlet => (-z.re).exp(),
        Family::Power | Family::Neumann => z.norm(),
        Family::Kapteyn => omega_kapteyn(z),
    }
}

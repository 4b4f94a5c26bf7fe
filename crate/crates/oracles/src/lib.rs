//! Reference computations that share no code path with `kapteyn-core`.
//!
//! Everything here is deliberately slow and simple: exact big-integer
//! arithmetic for Bessel values, a dense eigenvalue solve for polynomial
//! roots, and a scalar Newton iteration for Kepler's equation.

pub mod bessel;
pub mod companion;
pub mod kepler;

pub use bessel::{bessel_j, OracleValue};
pub use companion::polynomial_roots;
pub use kepler::eccentric_anomaly_offset;

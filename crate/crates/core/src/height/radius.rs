use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadiusError {
    #[error("mean anomaly must be finite, got {0}")]
    NonFinite(f64),
    #[error("no root converged for mean anomaly {0}")]
    NoConvergence(f64),
}

const MAX_ITER: usize = 200;
const TOL: f64 = 1e-14;

/// Residual of `w - tan w = M`, which is what remains after substituting
/// `z = 1 / cos w` into `w = M + z sin w`.
fn residual(w: Complex64, m: f64) -> Option<(Complex64, Complex64)> {
    let t = w.tan();
    if !t.is_finite() {
        return None;
    }
    Some((w - t - m, -t * t))
}

fn newton(mut w: Complex64, m: f64) -> Option<Complex64> {
    let (mut g, mut dg) = residual(w, m)?;
    for _ in 0..MAX_ITER {
        if g.norm() <= TOL * (1.0 + w.norm()) {
            // one more step to polish, then accept
            if dg.norm() > 0.0 {
                let polished = w - g / dg;
                if let Some((gp, _)) = residual(polished, m) {
                    if gp.norm() <= g.norm() {
                        return Some(polished);
                    }
                }
            }
            return Some(w);
        }
        if dg.norm() < 1e-300 {
            return None;
        }
        let step = g / dg;
        let mut lambda = 1.0;
        loop {
            let trial = w - step * lambda;
            if let Some((gt, dgt)) = residual(trial, m) {
                if gt.norm() < g.norm() {
                    w = trial;
                    g = gt;
                    dg = dgt;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-8 {
                return None;
            }
        }
    }
    None
}

/// Convergence radius in the eccentricity of the Lagrange series for
/// Kepler's equation `E = M + e sin E`: the smallest `|z|` over solutions of
/// `z cos w = 1`, `w = M + z sin w`.
pub fn lagrange_radius(mean_anomaly: f64) -> Result<f64, RadiusError> {
    if !mean_anomaly.is_finite() {
        return Err(RadiusError::NonFinite(mean_anomaly));
    }
    let m = mean_anomaly;
    let mut best = f64::INFINITY;
    for k in -8..=8 {
        for j in -8..=8 {
            let start = Complex64::new(m + k as f64 * std::f64::consts::FRAC_PI_8, j as f64 / 4.0);
            let Some(w) = newton(start, m) else { continue };
            // tan w = 0 gives w = M with a vanishing derivative: not a branch point
            if w.tan().norm() < 1e-6 {
                continue;
            }
            let z = w.cos().inv();
            let r = z.norm();
            if r.is_finite() && r < best {
                best = r;
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(RadiusError::NoConvergence(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn laplace_limit() {
        let r = lagrange_radius(FRAC_PI_2).unwrap();
        assert!((r - 0.66274).abs() < 5e-5, "{r}");
        // w = pi/2 + i t with t = coth t gives r = 1 / sinh t
        let mut t: f64 = 1.2;
        for _ in 0..60 {
            t -= (t - 1.0 / t.tanh()) / (1.0 + 1.0 / t.sinh().powi(2));
        }
        assert!((r - 1.0 / t.sinh()).abs() < 1e-12);
    }

    #[test]
    fn footnote_case() {
        let r = lagrange_radius(0.2).unwrap();
        assert!((r - 0.84889).abs() < 5e-5, "{r}");
    }

    #[test]
    fn minimal_at_quarter_period() {
        let at = lagrange_radius(FRAC_PI_2).unwrap();
        for i in 1..40 {
            let m = PI * i as f64 / 40.0;
            assert!(lagrange_radius(m).unwrap() >= at - 1e-12, "M={m}");
        }
    }

    #[test]
    fn symmetric_and_periodic() {
        for &m in &[0.2, 0.7, 1.3, 2.9] {
            let r = lagrange_radius(m).unwrap();
            assert!((lagrange_radius(-m).unwrap() - r).abs() < 1e-9);
            assert!((lagrange_radius(m + 2.0 * PI).unwrap() - r).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(lagrange_radius(f64::NAN).is_err());
    }
}

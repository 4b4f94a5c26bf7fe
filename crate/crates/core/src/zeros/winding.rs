use super::ZeroError;
use crate::logcomplex::wrap_phase;
use crate::series::Holomorphic;
use crate::window::WindowBox;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, TAU};

const INITIAL_SAMPLES: usize = 32;
/// Segments shorter than this fraction of the perimeter signal a zero on
/// (or numerically on) the contour.
const MIN_SEGMENT: f64 = 1e-12;
/// Largest accepted change of `log f` across a segment.
const MAX_STEP: f64 = 1.0;
/// Largest accepted disagreement between a segment's `log f` change and the
/// sum over its two halves.
const MAX_DEFECT: f64 = 0.2;

/// Change of `log f` from `a` to `b`, with the phase part wrapped.
fn log_step(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (b.0 - a.0, wrap_phase(b.1 - a.1))
}

fn small(d: (f64, f64)) -> bool {
    d.0.hypot(d.1) < MAX_STEP && d.1.abs() < FRAC_PI_2
}

/// Phase change of `f` along one edge.
///
/// A segment is accepted once the change of `log f` over it and over both
/// its halves is small and the halves add up to the whole; otherwise it is
/// bisected. The phase changes of accepted halves are summed.
fn edge_phase_change<F: Holomorphic + ?Sized>(f: &F, a: Complex64, b: Complex64, min_len: f64) -> Result<f64, ZeroError> {
    let sample = |t: f64| -> Result<(f64, f64), ZeroError> {
        let z = a + (b - a) * t;
        let v = f.eval_log(z);
        let (m, p) = (v.log_mag(), v.phase());
        if v.is_zero() || !m.is_finite() || !p.is_finite() {
            return Err(ZeroError::BoundaryZero(z));
        }
        Ok((m, p))
    };
    let len = (b - a).norm();
    let mut total = 0.0;
    let mut stack = Vec::new();
    let mut prev = (0.0, sample(0.0)?);
    for i in 1..=INITIAL_SAMPLES {
        let t = i as f64 / INITIAL_SAMPLES as f64;
        let cur = (t, sample(t)?);
        stack.push((prev, cur));
        // finish this coarse segment before the next, keeping the
        // summation order fixed
        while let Some(((t0, v0), (t1, v1))) = stack.pop() {
            let tm = 0.5 * (t0 + t1);
            if (t1 - t0) * len < min_len {
                return Err(ZeroError::BoundaryZero(a + (b - a) * tm));
            }
            let vm = sample(tm)?;
            let whole = log_step(v0, v1);
            let left = log_step(v0, vm);
            let right = log_step(vm, v1);
            let defect = (left.0 + right.0 - whole.0).hypot(left.1 + right.1 - whole.1);
            if small(whole) && small(left) && small(right) && defect < MAX_DEFECT {
                total += left.1 + right.1;
                continue;
            }
            // right half pushed first so the left half is summed first
            stack.push(((tm, vm), (t1, v1)));
            stack.push(((t0, v0), (tm, vm)));
        }
        prev = cur;
    }
    Ok(total)
}

/// Winding number of `f` around the counterclockwise boundary of `window`.
///
/// Fails with [`ZeroError::BoundaryZero`] when a zero lies on the contour to
/// within `1e-12` of the perimeter.
pub fn winding_count<F: Holomorphic + ?Sized>(f: &F, window: &WindowBox) -> Result<i64, ZeroError> {
    let min_len = MIN_SEGMENT * window.perimeter();
    let c = window.corners();
    let mut total = 0.0;
    for k in 0..4 {
        total += edge_phase_change(f, c[k], c[(k + 1) % 4], min_len)?;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    // increments are wrapped, so the loop closes up to rounding
    if (turns - rounded).abs() >= 0.25 {
        return Err(ZeroError::NonIntegralWinding(turns));
    }
    Ok(rounded as i64)
}

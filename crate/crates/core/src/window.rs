use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
#[error("degenerate window: lower-left {lo} must be strictly below and left of upper-right {hi}")]
pub struct DegenerateWindow {
    pub lo: Complex64,
    pub hi: Complex64,
}

/// Axis-aligned rectangle `[lo.re, hi.re] x [lo.im, hi.im]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowBox {
    lo: Complex64,
    hi: Complex64,
}

impl WindowBox {
    pub fn new(lo: Complex64, hi: Complex64) -> Result<Self, DegenerateWindow> {
        let finite = [lo.re, lo.im, hi.re, hi.im].iter().all(|v| v.is_finite());
        if !(finite && lo.re < hi.re && lo.im < hi.im) {
            return Err(DegenerateWindow { lo, hi });
        }
        Ok(WindowBox { lo, hi })
    }

    /// `[-half_width, half_width]^2`
    pub fn square(half_width: f64) -> Result<Self, DegenerateWindow> {
        Self::new(Complex64::new(-half_width, -half_width), Complex64::new(half_width, half_width))
    }

    pub fn from_bounds(re_min: f64, im_min: f64, re_max: f64, im_max: f64) -> Result<Self, DegenerateWindow> {
        Self::new(Complex64::new(re_min, im_min), Complex64::new(re_max, im_max))
    }

    pub fn lo(&self) -> Complex64 {
        self.lo
    }

    pub fn hi(&self) -> Complex64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi.re - self.lo.re
    }

    pub fn height(&self) -> f64 {
        self.hi.im - self.lo.im
    }

    pub fn center(&self) -> Complex64 {
        (self.lo + self.hi) * 0.5
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.width() + self.height())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.lo.re && z.re <= self.hi.re && z.im >= self.lo.im && z.im <= self.hi.im
    }

    /// Scales the box about its center by `factor`.
    pub fn inflate(&self, factor: f64) -> Self {
        let c = self.center();
        let hw = self.width() * 0.5 * factor;
        let hh = self.height() * 0.5 * factor;
        WindowBox { lo: c - Complex64::new(hw, hh), hi: c + Complex64::new(hw, hh) }
    }

    /// Counterclockwise corners starting at `lo`.
    pub fn corners(&self) -> [Complex64; 4] {
        [self.lo, Complex64::new(self.hi.re, self.lo.im), self.hi, Complex64::new(self.lo.re, self.hi.im)]
    }

    /// Four children split at fractions `fx`, `fy` of the width and height,
    /// ordered lower-left, lower-right, upper-left, upper-right.
    pub fn split(&self, fx: f64, fy: f64) -> [WindowBox; 4] {
        let mx = self.lo.re + fx * self.width();
        let my = self.lo.im + fy * self.height();
        let (lo, hi) = (self.lo, self.hi);
        [
            WindowBox { lo, hi: Complex64::new(mx, my) },
            WindowBox { lo: Complex64::new(mx, lo.im), hi: Complex64::new(hi.re, my) },
            WindowBox { lo: Complex64::new(lo.re, my), hi: Complex64::new(mx, hi.im) },
            WindowBox { lo: Complex64::new(mx, my), hi },
        ]
    }

    /// Pixel-center sample points of an `nx x ny` grid, row-major from the top row.
    pub fn pixel_centers(&self, nx: usize, ny: usize) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            let y = self.hi.im - (j as f64 + 0.5) * self.height() / ny as f64;
            for i in 0..nx {
                let x = self.lo.re + (i as f64 + 0.5) * self.width() / nx as f64;
                out.push(Complex64::new(x, y));
            }
        }
        out
    }
}

impl fmt::Display for WindowBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.lo.re, self.hi.re, self.lo.im, self.hi.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate() {
        assert!(WindowBox::from_bounds(0.0, 0.0, 0.0, 1.0).is_err());
        assert!(WindowBox::from_bounds(0.0, 1.0, 1.0, 0.0).is_err());
        assert!(WindowBox::from_bounds(0.0, 0.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn split_tiles_parent() {
        let b = WindowBox::square(2.0).unwrap();
        let kids = b.split(0.3, 0.6);
        let area: f64 = kids.iter().map(|k| k.width() * k.height()).sum();
        assert!((area - 16.0).abs() < 1e-12);
        assert_eq!(kids[0].lo(), b.lo());
        assert_eq!(kids[3].hi(), b.hi());
    }

    #[test]
    fn inflate_keeps_center() {
        let b = WindowBox::from_bounds(-1.0, 0.0, 3.0, 1.0).unwrap();
        let c = b.inflate(1.5);
        assert_eq!(c.center(), b.center());
        assert!((c.width() - 6.0).abs() < 1e-15);
    }
}

//! Phase plots: pixels colored by the argument of `f`, with boundary curves
//! and zero markers drawn on top.

use crate::height::BoundaryPolyline;
use crate::par;
use crate::series::Holomorphic;
use crate::window::WindowBox;
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::io::{self, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhaseError {
    #[error("image must have positive width and height, got {0}x{1}")]
    EmptyImage(usize, usize),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];

#[derive(Clone, Debug, Default)]
pub struct Overlays {
    pub boundaries: Vec<BoundaryPolyline>,
    pub zeros: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RenderOptions {
    /// Darkens each band `2^k <= |f| < 2^(k+1)` from light to dark. Off
    /// by default.
    pub modulus_shading: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseImage {
    pub width: usize,
    pub height: usize,
    pub window: WindowBox,
    /// Row-major from the top row.
    pub pixels: Vec<Rgb>,
}

fn quantize(x: f64) -> u8 {
    (x.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

/// HSV to RGB with full saturation; `hue` in `[0, 1)`.
pub fn hue_to_rgb(hue: f64, value: f64) -> Rgb {
    let h6 = hue.rem_euclid(1.0) * 6.0;
    let sector = (h6.floor() as usize).min(5);
    let f = h6 - sector as f64;
    let (r, g, b) = match sector {
        0 => (1.0, f, 0.0),
        1 => (1.0 - f, 1.0, 0.0),
        2 => (0.0, 1.0, f),
        3 => (0.0, 1.0 - f, 1.0),
        4 => (f, 0.0, 1.0),
        _ => (1.0, 0.0, 1.0 - f),
    };
    [quantize(r * value), quantize(g * value), quantize(b * value)]
}

fn color<F: Holomorphic + ?Sized>(f: &F, z: Complex64, options: RenderOptions) -> Rgb {
    let v = f.eval_log(z);
    let log_mag = v.log_mag();
    if v.is_zero() || !log_mag.is_finite() || !v.phase().is_finite() {
        return BLACK;
    }
    let hue = (v.phase() / TAU).rem_euclid(1.0);
    let value = if options.modulus_shading {
        let t = (log_mag / std::f64::consts::LN_2).rem_euclid(1.0);
        1.0 - 0.3 * t
    } else {
        1.0
    };
    hue_to_rgb(hue, value)
}

impl PhaseImage {
    /// Pixel containing `z`, if inside the image.
    pub fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let (x, y) = self.pixel_coords(z);
        let (x, y) = (x.floor(), y.floor());
        (x >= 0.0 && y >= 0.0 && x < self.width as f64 && y < self.height as f64).then(|| (x as usize, y as usize))
    }

    fn pixel_coords(&self, z: Complex64) -> (f64, f64) {
        let w = &self.window;
        let x = (z.re - w.lo().re) / w.width() * self.width as f64;
        let y = (w.hi().im - z.im) / w.height() * self.height as f64;
        (x, y)
    }

    pub fn get(&self, col: usize, row: usize) -> Rgb {
        self.pixels[row * self.width + col]
    }

    fn put(&mut self, col: i64, row: i64, c: Rgb) {
        if col >= 0 && row >= 0 && (col as usize) < self.width && (row as usize) < self.height {
            self.pixels[row as usize * self.width + col as usize] = c;
        }
    }

    fn line(&mut self, a: (i64, i64), b: (i64, i64)) {
        let (mut x, mut y) = a;
        let dx = (b.0 - a.0).abs();
        let dy = -(b.1 - a.1).abs();
        let sx = if a.0 < b.0 { 1 } else { -1 };
        let sy = if a.1 < b.1 { 1 } else { -1 };
        let mut err = dx + dy;
        loop {
            self.put(x, y, BLACK);
            if (x, y) == b {
                break;
            }
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
        }
    }

    fn grid_point(&self, z: Complex64) -> Option<(i64, i64)> {
        let (x, y) = self.pixel_coords(z);
        // keep far-off vertices from overflowing the line stepper
        let limit = 4.0 * (self.width + self.height) as f64;
        (x.abs() < limit && y.abs() < limit).then(|| (x.floor() as i64, y.floor() as i64))
    }

    /// Draws one-pixel black polylines and plus-shaped zero markers.
    pub fn draw_overlays(&mut self, overlays: &Overlays) {
        for b in &overlays.boundaries {
            for (p, q) in b.segments() {
                if let (Some(p), Some(q)) = (self.grid_point(p), self.grid_point(q)) {
                    self.line(p, q);
                }
            }
        }
        for &z in &overlays.zeros {
            if let Some((x, y)) = self.grid_point(z) {
                for (dx, dy) in [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)] {
                    self.put(x + dx, y + dy, BLACK);
                }
            }
        }
    }

    /// Binary PPM: header `P6 <width> <height> 255` and a newline, then RGB
    /// bytes row by row from the top.
    pub fn to_p6(&self) -> Vec<u8> {
        let mut out = format!("P6 {} {} 255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn write_p6<W: Write>(&self, mut w: W) -> Result<(), PhaseError> {
        w.write_all(&self.to_p6())?;
        Ok(())
    }
}

/// Phase plot of `f` over `window`, sampled at pixel centers with the
/// imaginary axis pointing up.
pub fn render<F: Holomorphic + ?Sized>(
    f: &F,
    window: &WindowBox,
    width: usize,
    height: usize,
    overlays: &Overlays,
) -> Result<PhaseImage, PhaseError> {
    render_with(f, window, width, height, overlays, RenderOptions::default())
}

pub fn render_with<F: Holomorphic + ?Sized>(
    f: &F,
    window: &WindowBox,
    width: usize,
    height: usize,
    overlays: &Overlays,
    options: RenderOptions,
) -> Result<PhaseImage, PhaseError> {
    if width == 0 || height == 0 {
        return Err(PhaseError::EmptyImage(width, height));
    }
    let dx = window.width() / width as f64;
    let dy = window.height() / height as f64;
    let rows: Vec<Vec<Rgb>> = par::map_range(height, |j| {
        let y = window.hi().im - (j as f64 + 0.5) * dy;
        (0..width).map(|i| color(f, Complex64::new(window.lo().re + (i as f64 + 0.5) * dx, y), options)).collect()
    });
    let mut image = PhaseImage { width, height, window: *window, pixels: rows.into_iter().flatten().collect() };
    image.draw_overlays(overlays);
    Ok(image)
}

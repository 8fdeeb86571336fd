//! Midpoint-rule quadrature over rectangular brightness maps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::NumericsError;

/// Rectangular grid of effective temperatures (Kelvin) on the source plane.
///
/// `origin` is the lower-left corner of the grid in metres; values are stored
/// row-major, north-up (row 0 is the northernmost, i.e. largest y). The pixel
/// at (row r, col c) is the square of side `pixel_size` whose centre is
/// `(origin_x + (c + 1/2) h, origin_y + (rows - r - 1/2) h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PixelMap {
    pub rows: usize,
    pub cols: usize,
    /// Pixel side length in metres.
    pub pixel_size: f64,
    /// Lower-left corner (x, y) in metres.
    pub origin: (f64, f64),
    /// Row-major temperatures, `rows * cols` entries, north-up.
    pub values: Vec<f64>,
}

impl PixelMap {
    pub fn new(
        rows: usize,
        cols: usize,
        pixel_size: f64,
        origin: (f64, f64),
        values: Vec<f64>,
    ) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 {
            return Err(NumericsError::EmptyMap);
        }
        if values.len() != rows * cols {
            return Err(NumericsError::DimensionMismatch {
                expected: rows * cols,
                got: values.len(),
            });
        }
        if !(pixel_size.is_finite() && pixel_size > 0.0) || !origin.0.is_finite() || !origin.1.is_finite() {
            return Err(NumericsError::NonFiniteInput);
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(NumericsError::NonFiniteInput);
        }
        Ok(Self {
            rows,
            cols,
            pixel_size,
            origin,
            values,
        })
    }

    #[inline]
    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    /// Centre of pixel (r, c) in metres.
    #[inline]
    pub fn center(&self, r: usize, c: usize) -> (f64, f64) {
        let h = self.pixel_size;
        (
            self.origin.0 + (c as f64 + 0.5) * h,
            self.origin.1 + (self.rows as f64 - r as f64 - 0.5) * h,
        )
    }

    pub fn pixel_area(&self) -> f64 {
        self.pixel_size * self.pixel_size
    }

    /// Parse the plain-text grid format: first line
    /// `rows cols pixel_size_m origin_x_m origin_y_m`, then `rows` lines of
    /// whitespace-separated Kelvin values, row-major, north-up.
    pub fn from_text(text: &str) -> Result<Self, NumericsError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(NumericsError::EmptyMap)?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(NumericsError::MapFormat {
                detail: format!("header needs 5 fields, got {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64, NumericsError> {
            s.parse::<f64>().map_err(|_| NumericsError::MapFormat {
                detail: format!("bad number {s:?}"),
            })
        };
        let rows = parse(fields[0])? as usize;
        let cols = parse(fields[1])? as usize;
        let pixel = parse(fields[2])?;
        let ox = parse(fields[3])?;
        let oy = parse(fields[4])?;
        let mut values = Vec::with_capacity(rows * cols);
        for line in lines {
            for tok in line.split_whitespace() {
                values.push(parse(tok)?);
            }
        }
        Self::new(rows, cols, pixel, (ox, oy), values)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} {} {:e} {:e} {:e}\n",
            self.rows, self.cols, self.pixel_size, self.origin.0, self.origin.1
        );
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:e}", self.value(r, c))).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Midpoint-rule integral  Σ T(pixel) · kernel(centre) · pixel_area.
pub fn integrate_pixels(
    map: &PixelMap,
    mut kernel: impl FnMut(f64, f64) -> Complex64,
) -> Result<Complex64, NumericsError> {
    if map.rows == 0 || map.cols == 0 || map.values.is_empty() {
        return Err(NumericsError::EmptyMap);
    }
    let area = map.pixel_area();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..map.rows {
        for c in 0..map.cols {
            let t = map.value(r, c);
            if t == 0.0 {
                continue;
            }
            let (x, y) = map.center(r, c);
            acc += kernel(x, y) * t;
        }
    }
    Ok(acc * area)
}

/// Rasterize a uniform disc into a PixelMap covering `[cx - half, cx + half] x
/// [cy - half, cy + half]` with `n x n` pixels. Edge pixels carry the covered
/// area fraction from a 4x4 subsample, so the raster converges cleanly under
/// the midpoint rule.
pub fn rasterize_disc(
    radius: f64,
    temperature: f64,
    center: (f64, f64),
    half_extent: f64,
    n: usize,
) -> PixelMap {
    assert!(n > 0 && radius > 0.0 && half_extent > 0.0);
    let h = 2.0 * half_extent / n as f64;
    let ox = center.0 - half_extent;
    let oy = center.1 - half_extent;
    let r2 = radius * radius;
    let mut values = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let x = ox + (c as f64 + 0.5) * h;
            let y = oy + (n as f64 - r as f64 - 0.5) * h;
            let dx = x - center.0;
            let dy = y - center.1;
            let dist = (dx * dx + dy * dy).sqrt();
            let half_diag = h * std::f64::consts::SQRT_2 / 2.0;
            let val = if dist + half_diag <= radius {
                temperature
            } else if dist - half_diag > radius {
                0.0
            } else {
                // boundary pixel: 4x4 coverage subsample
                let mut hits = 0u32;
                for si in 0..4 {
                    for sj in 0..4 {
                        let sx = x - 0.5 * h + (sj as f64 + 0.5) * h / 4.0;
                        let sy = y - 0.5 * h + (si as f64 + 0.5) * h / 4.0;
                        let ddx = sx - center.0;
                        let ddy = sy - center.1;
                        if ddx * ddx + ddy * ddy <= r2 {
                            hits += 1;
                        }
                    }
                }
                temperature * hits as f64 / 16.0
            };
            values[r * n + c] = val;
        }
    }
    PixelMap::new(n, n, h, (ox, oy), values).expect("disc raster is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_map_unit_kernel_gives_t_times_area() {
        let map = PixelMap::new(8, 8, 0.5, (0.0, 0.0), vec![300.0; 64]).unwrap();
        let total = integrate_pixels(&map, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let want = 300.0 * 64.0 * 0.25;
        assert!((total.re - want).abs() < 1e-9 * want);
        assert!(total.im.abs() < 1e-12);
    }

    #[test]
    fn full_period_kernel_cancels() {
        // e^{2πi v x} with one full period across the map width
        let n = 64;
        let width = 10.0;
        let map = PixelMap::new(n, n, width / n as f64, (0.0, 0.0), vec![1.0; n * n]).unwrap();
        let v = 1.0 / width;
        let z = integrate_pixels(&map, |x, _| (Complex64::i() * 2.0 * PI * v * x).exp()).unwrap();
        assert!(z.norm() < 1e-10 * width * width, "|integral| = {}", z.norm());
    }

    #[test]
    fn disc_raster_area_converges() {
        let radius = 30e3;
        let t = 300.0;
        let map = rasterize_disc(radius, t, (0.0, 0.0), 1.2 * radius, 512);
        let total = integrate_pixels(&map, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        let want = t * PI * radius * radius;
        let rel = (total.re - want).abs() / want;
        assert!(rel < 1e-4, "area relative error {rel:e}");
    }

    #[test]
    fn text_roundtrip() {
        let map = PixelMap::new(2, 3, 1.5, (-1.0, 2.0), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let text = map.to_text();
        let back = PixelMap::from_text(&text).unwrap();
        assert_eq!(map, back);
    }

    #[test]
    fn north_up_orientation() {
        // row 0 must map to the largest y
        let map = PixelMap::new(2, 1, 1.0, (0.0, 0.0), vec![7.0, 3.0]).unwrap();
        let (_, y_top) = map.center(0, 0);
        let (_, y_bot) = map.center(1, 0);
        assert!(y_top > y_bot);
        assert_eq!(map.value(0, 0), 7.0);
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(PixelMap::new(0, 3, 1.0, (0.0, 0.0), vec![]).is_err());
        assert!(PixelMap::new(1, 1, 1.0, (0.0, 0.0), vec![-2.0]).is_err());
        assert!(PixelMap::from_text("1 2 3\n").is_err());
    }
}

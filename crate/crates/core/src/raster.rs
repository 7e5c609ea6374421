//! Density histograms over a rectangle of the complex plane, and their
//! grayscale rendering.
//!
//! Column `c` covers `re ∈ [xmin + c·Δx, xmin + (c+1)·Δx)` and row `r`
//! covers `im ∈ (ymax - (r+1)·Δy, ymax - r·Δy]`, so row 0 is the top of
//! the image. Points exactly on `xmax` or `ymin` fall into the last
//! column or row. Anything else outside the viewport is tallied in
//! `dropped`.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Viewport {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !finite || xmin >= xmax || ymin >= ymax {
            return Err(Error::InvalidGeometry("viewport needs xmin < xmax and ymin < ymax"));
        }
        Ok(Viewport { xmin, xmax, ymin, ymax })
    }
}

impl Default for Viewport {
    /// `[-2, 2] × [-1.5, 1.5]`.
    fn default() -> Self {
        Viewport {
            xmin: -2.0,
            xmax: 2.0,
            ymin: -1.5,
            ymax: 1.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityGrid {
    width: usize,
    height: usize,
    viewport: Viewport,
    bins: Vec<u64>,
    dropped: u64,
}

impl DensityGrid {
    pub fn new(width: usize, height: usize, viewport: Viewport) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidGeometry("grid dimensions must be positive"));
        }
        Viewport::new(viewport.xmin, viewport.xmax, viewport.ymin, viewport.ymax)?;
        Ok(DensityGrid {
            width,
            height,
            viewport,
            bins: vec![0; width * height],
            dropped: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn viewport(&self) -> Viewport {
        self.viewport
    }

    pub fn bins(&self) -> &[u64] {
        &self.bins
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    pub fn count(&self, col: usize, row: usize) -> u64 {
        self.bins[row * self.width + col]
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().sum()
    }

    /// `(col, row)` of the cell holding `z`, if inside the viewport.
    pub fn cell_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let v = &self.viewport;
        if !(z.re >= v.xmin && z.re <= v.xmax && z.im >= v.ymin && z.im <= v.ymax) {
            return None;
        }
        let col = ((z.re - v.xmin) * self.width as f64 / (v.xmax - v.xmin)).floor() as usize;
        let row = ((v.ymax - z.im) * self.height as f64 / (v.ymax - v.ymin)).floor() as usize;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    /// Bounds `(re0, re1, im0, im1)` of a cell.
    pub fn cell_bounds(&self, col: usize, row: usize) -> (f64, f64, f64, f64) {
        let v = &self.viewport;
        let dx = (v.xmax - v.xmin) / self.width as f64;
        let dy = (v.ymax - v.ymin) / self.height as f64;
        let x0 = v.xmin + col as f64 * dx;
        let y1 = v.ymax - row as f64 * dy;
        (x0, x0 + dx, y1 - dy, y1)
    }

    pub fn accumulate<I>(&mut self, points: I)
    where
        I: IntoIterator<Item = Complex64>,
    {
        for z in points {
            match self.cell_of(z) {
                Some((c, r)) => self.bins[r * self.width + c] += 1,
                None => self.dropped += 1,
            }
        }
    }

    fn same_geometry(&self, other: &DensityGrid) -> bool {
        self.width == other.width && self.height == other.height && self.viewport == other.viewport
    }

    /// Adds `other` into `self` bin for bin.
    pub fn merge_from(&mut self, other: &DensityGrid) -> Result<()> {
        if !self.same_geometry(other) {
            return Err(Error::GeometryMismatch);
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            *a += b;
        }
        self.dropped += other.dropped;
        Ok(())
    }

    pub fn merge(&self, other: &DensityGrid) -> Result<DensityGrid> {
        let mut out = self.clone();
        out.merge_from(other)?;
        Ok(out)
    }

    /// Debug dump: one `col,row,count` line per nonzero bin, row-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "col,row,count")?;
        for row in 0..self.height {
            for col in 0..self.width {
                let c = self.count(col, row);
                if c > 0 {
                    writeln!(out, "{col},{row},{c}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ColorMap {
    Linear,
    #[default]
    Log,
}

/// Row-major 8-bit grayscale, top row first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

pub fn to_image(grid: &DensityGrid, map: ColorMap) -> ImageBuffer {
    let max = grid.bins.iter().copied().max().unwrap_or(0);
    let pixels = if max == 0 {
        vec![0; grid.bins.len()]
    } else {
        let scale = |c: u64| -> u8 {
            let v = match map {
                ColorMap::Linear => 255.0 * c as f64 / max as f64,
                ColorMap::Log => 255.0 * (c as f64).ln_1p() / (max as f64).ln_1p(),
            };
            v.round() as u8
        };
        grid.bins.iter().map(|&c| scale(c)).collect()
    };
    ImageBuffer {
        width: grid.width,
        height: grid.height,
        pixels,
    }
}

/// Binary PGM (`P5`). Returns the number of bytes written.
pub fn write_pgm<W: Write>(img: &ImageBuffer, mut sink: W) -> io::Result<usize> {
    let header = format!("P5\n{} {}\n255\n", img.width, img.height);
    sink.write_all(header.as_bytes())?;
    sink.write_all(&img.pixels)?;
    Ok(header.len() + img.pixels.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> DensityGrid {
        DensityGrid::new(w, h, Viewport::default()).unwrap()
    }

    #[test]
    fn corners_and_edges() {
        let g = grid(4, 3);
        assert_eq!(g.cell_of(Complex64::new(-2.0, 1.5)), Some((0, 0)));
        assert_eq!(g.cell_of(Complex64::new(2.0, -1.5)), Some((3, 2)));
        assert_eq!(g.cell_of(Complex64::new(-1.0, 0.5)), Some((1, 1)));
        assert_eq!(g.cell_of(Complex64::new(-1.0 - 1e-12, 0.5 + 1e-12)), Some((0, 0)));
        assert_eq!(g.cell_of(Complex64::new(2.1, 0.0)), None);
        assert_eq!(g.cell_of(Complex64::new(f64::NAN, 0.0)), None);
    }

    #[test]
    fn conservation_and_order_independence() {
        let pts: Vec<Complex64> = (0..500)
            .map(|i| Complex64::from_polar(0.01 * i as f64, i as f64))
            .collect();
        let mut g = grid(16, 12);
        g.accumulate(pts.iter().copied());
        assert_eq!(g.total() + g.dropped(), 500);
        let first = g.clone();
        g.accumulate(pts.iter().rev().copied());
        for (a, b) in g.bins().iter().zip(first.bins()) {
            assert_eq!(*a, 2 * b);
        }
        assert_eq!(g.dropped(), 2 * first.dropped());
    }

    #[test]
    fn merge_rules() {
        let mut a = grid(8, 6);
        let mut b = grid(8, 6);
        a.accumulate([Complex64::new(0.1, 0.1), Complex64::new(5.0, 0.0)]);
        b.accumulate([Complex64::new(-1.0, -1.0)]);
        assert_eq!(a.merge(&grid(8, 6)).unwrap(), a);
        assert_eq!(a.merge(&b).unwrap(), b.merge(&a).unwrap());
        assert!(a.merge(&grid(8, 5)).is_err());
    }

    #[test]
    fn colormaps() {
        let img = to_image(&grid(3, 2), ColorMap::Log);
        assert!(img.pixels.iter().all(|&p| p == 0));

        let mut g = grid(2, 1);
        g.accumulate([Complex64::new(-1.0, 0.0)]);
        for map in [ColorMap::Linear, ColorMap::Log] {
            assert_eq!(to_image(&g, map).pixels, vec![255, 0]);
        }
        g.accumulate([Complex64::new(1.0, 0.0); 3]);
        assert_eq!(to_image(&g, ColorMap::Linear).pixels, vec![85, 255]);
        // round(255 ln 2 / ln 4) = round(127.5) = 128
        assert_eq!(to_image(&g, ColorMap::Log).pixels, vec![128, 255]);
    }

    #[test]
    fn pgm_bytes() {
        let img = ImageBuffer {
            width: 1,
            height: 1,
            pixels: vec![0],
        };
        let mut out = Vec::new();
        assert_eq!(write_pgm(&img, &mut out).unwrap(), 12);
        assert_eq!(out, b"P5\n1 1\n255\n\0");

        let img = ImageBuffer {
            width: 2,
            height: 2,
            pixels: vec![255; 4],
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_pgm(&img, &mut a).unwrap();
        write_pgm(&img, &mut b).unwrap();
        assert_eq!(&a[..], b"P5\n2 2\n255\n\xff\xff\xff\xff");
        assert_eq!(a, b);
    }

    #[test]
    fn bad_geometry() {
        assert!(DensityGrid::new(0, 3, Viewport::default()).is_err());
        assert!(Viewport::new(1.0, 1.0, 0.0, 1.0).is_err());
    }
}

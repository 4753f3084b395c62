//! Escape-time renders of filled Julia sets and density plots of the critical orbit.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest accepted image side.
pub const MAX_RESOLUTION: usize = 8192;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("resolution {0} outside 1..={MAX_RESOLUTION}")]
    Resolution(usize),
    #[error("viewport width must be positive and finite")]
    Viewport,
    #[error("budget {0} above 10^8")]
    Budget(u64),
    #[error("writing image: {0}")]
    Io(#[from] std::io::Error),
    #[error("encoding png: {0}")]
    Png(#[from] image::ImageError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapFamily {
    Quadratic,
    Cubic,
}

impl MapFamily {
    fn step(self, lambda: Complex64, z: Complex64) -> Complex64 {
        match self {
            MapFamily::Quadratic => lambda * z + z * z,
            MapFamily::Cubic => lambda * z * (1.0 + z) * (1.0 + z),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coloring {
    EscapeTime,
    /// Shade by the closest approach of the orbit to 0.
    OrbitTrapOrigin,
}

/// Center and width of a square window in the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: [f64; 2],
    pub width: f64,
}

impl Viewport {
    pub fn new(cx: f64, cy: f64, width: f64) -> Viewport {
        Viewport { center: [cx, cy], width }
    }

    /// Pixel centers, row 0 at the top.
    fn pixel(&self, res: usize, row: usize, col: usize) -> Complex64 {
        let h = self.width / res as f64;
        let x = self.center[0] - self.width / 2.0 + (col as f64 + 0.5) * h;
        let y = self.center[1] + self.width / 2.0 - (row as f64 + 0.5) * h;
        Complex64::new(x, y)
    }

    fn locate(&self, res: usize, z: Complex64) -> Option<(usize, usize)> {
        let h = self.width / res as f64;
        let col = ((z.re - (self.center[0] - self.width / 2.0)) / h).floor();
        let row = (((self.center[1] + self.width / 2.0) - z.im) / h).floor();
        let n = res as f64;
        (col >= 0.0 && col < n && row >= 0.0 && row < n).then_some((row as usize, col as usize))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenderJob {
    pub map: MapFamily,
    pub alpha: f64,
    pub viewport: Viewport,
    pub resolution: usize,
    pub max_iter: u32,
    pub escape_radius: f64,
    pub coloring: Coloring,
}

/// An 8-bit RGB image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<u8>,
}

impl Image {
    pub fn write_ppm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P6\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.rgb)
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(self.rgb.len() + 32);
        self.write_ppm(&mut buf).expect("writing to memory");
        buf
    }

    /// Writes PPM, or PNG when the extension is `.png`.
    pub fn save(&self, path: &Path) -> Result<(), RenderError> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")) {
            image::save_buffer(path, &self.rgb, self.width as u32, self.height as u32, image::ExtendedColorType::Rgb8)?;
        } else {
            let f = std::fs::File::create(path)?;
            let mut w = std::io::BufWriter::new(f);
            self.write_ppm(&mut w)?;
            w.flush()?;
        }
        Ok(())
    }

    pub fn is_uniform(&self) -> bool {
        self.rgb.chunks(3).all(|p| p == &self.rgb[..3])
    }
}

fn check(res: usize, v: &Viewport) -> Result<(), RenderError> {
    if res == 0 || res > MAX_RESOLUTION {
        return Err(RenderError::Resolution(res));
    }
    if !(v.width > 0.0 && v.width.is_finite()) {
        return Err(RenderError::Viewport);
    }
    Ok(())
}

const INTERIOR: [u8; 3] = [12, 12, 28];

fn escape_color(n: u32) -> [u8; 3] {
    let t = (n % 16) as f64 / 16.0;
    let tau = std::f64::consts::TAU;
    let ch = |phase: f64| (127.5 + 127.5 * (tau * (t + phase)).cos()).round() as u8;
    [ch(0.0), ch(1.0 / 3.0), ch(2.0 / 3.0)]
}

fn trap_color(d: f64) -> [u8; 3] {
    let v = (255.0 * (1.0 - (d.max(1e-12).log10() + 6.0) / 6.0).clamp(0.0, 1.0)).round() as u8;
    [v, v / 2, 255 - v]
}

/// Escape-time image of the filled Julia set; rows are computed in parallel and assembled by index.
pub fn render_julia(job: &RenderJob) -> Result<Image, RenderError> {
    check(job.resolution, &job.viewport)?;
    let res = job.resolution;
    let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU * job.alpha);
    let r2 = job.escape_radius * job.escape_radius;
    let mut rgb = vec![0u8; res * res * 3];
    rgb.par_chunks_mut(res * 3).enumerate().for_each(|(row, line)| {
        for col in 0..res {
            let mut z = job.viewport.pixel(res, row, col);
            let mut trap = z.norm();
            let mut escaped = None;
            for n in 0..job.max_iter {
                if z.norm_sqr() > r2 {
                    escaped = Some(n);
                    break;
                }
                z = job.map.step(lambda, z);
                trap = trap.min(z.norm());
            }
            let c = match (job.coloring, escaped) {
                (Coloring::EscapeTime, Some(n)) => escape_color(n),
                (Coloring::EscapeTime, None) => INTERIOR,
                (Coloring::OrbitTrapOrigin, Some(_)) => INTERIOR,
                (Coloring::OrbitTrapOrigin, None) => trap_color(trap),
            };
            line[col * 3..col * 3 + 3].copy_from_slice(&c);
        }
    });
    Ok(Image { width: res, height: res, rgb })
}

/// Log-density image of `P^k(cv)` for `1 ≤ k ≤ budget`, with `P(z) = λz + z²` and `cv = −λ²/4`.
pub fn render_postcritical(alpha: f64, budget: u64, viewport: &Viewport, res: usize) -> Result<Image, RenderError> {
    check(res, viewport)?;
    if budget > 100_000_000 {
        return Err(RenderError::Budget(budget));
    }
    let lambda = Complex64::from_polar(1.0, std::f64::consts::TAU * alpha);
    let mut counts = vec![0u32; res * res];
    let mut z = -lambda * lambda / 4.0;
    for _ in 0..budget {
        z = lambda * z + z * z;
        if !z.is_finite() || z.norm() > 1e6 {
            break;
        }
        if let Some((r, c)) = viewport.locate(res, z) {
            counts[r * res + c] = counts[r * res + c].saturating_add(1);
        }
    }
    let peak = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let mut rgb = vec![255u8; res * res * 3];
    for (px, &n) in rgb.chunks_mut(3).zip(&counts) {
        if n > 0 {
            let v = (1.0 + n as f64).ln() / (1.0 + peak).ln();
            let g = (200.0 * (1.0 - v)).round() as u8;
            px.copy_from_slice(&[g, g, g]);
        }
    }
    // Mark 0.
    if let Some((r, c)) = viewport.locate(res, Complex64::new(0.0, 0.0)) {
        rgb[(r * res + c) * 3..(r * res + c) * 3 + 3].copy_from_slice(&[220, 30, 30]);
    }
    Ok(Image { width: res, height: res, rgb })
}

/// Number of pixels hit by the orbit; the marker at 0 is not counted.
pub fn postcritical_hits(img: &Image) -> usize {
    img.rgb.chunks(3).filter(|p| p[0] == p[1] && p[1] == p[2] && p[0] < 255).count()
}

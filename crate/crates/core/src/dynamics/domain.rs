use std::collections::VecDeque;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;

/// `P(z) = z(1+z)²`.
pub fn cubic_p(z: Complex64) -> Complex64 {
    z * (1.0 + z) * (1.0 + z)
}

/// The domain `U = P^{-1}(B(0, 4/27 e^{4π})) \ ((-∞,-1] ∪ B)` of the cubic model, where `B`
/// is the component of `P^{-1}(B(0, 4/27 e^{-4π}))` containing `-1`.
///
/// `B` is a disk-like set of radius about `7·10^-4` around `-1`, far below the pixel size of a
/// plane-wide grid, so the component mask is flood-filled on a window centred at `-1` that is
/// a few times larger than `B`.
#[derive(Clone, Debug)]
pub struct DomainU {
    pub outer_radius: f64,
    pub inner_radius: f64,
    /// Pixels along each side of the mask window.
    pub resolution: usize,
    /// Half-width of the square window around `-1`.
    pub half_width: f64,
    mask: Vec<bool>,
}

pub const DEFAULT_MASK_RESOLUTION: usize = 2048;

impl DomainU {
    pub fn new(resolution: usize) -> DomainU {
        let outer_radius = 4.0 / 27.0 * (4.0 * PI).exp();
        let inner_radius = 4.0 / 27.0 * (-4.0 * PI).exp();
        // Near -1, P(z) ≈ -(1+z)², so B is close to the disk of radius √inner.
        let half_width = 4.0 * inner_radius.sqrt();
        let n = resolution.max(8);
        let mut d = DomainU { outer_radius, inner_radius, resolution: n, half_width, mask: vec![false; n * n] };
        d.flood_fill();
        d
    }

    pub fn pixel_size(&self) -> f64 {
        2.0 * self.half_width / self.resolution as f64
    }

    fn pixel_center(&self, i: usize, j: usize) -> Complex64 {
        let h = self.pixel_size();
        Complex64::new(-1.0 - self.half_width + (i as f64 + 0.5) * h, -self.half_width + (j as f64 + 0.5) * h)
    }

    fn pixel_of(&self, z: Complex64) -> Option<(usize, usize)> {
        let h = self.pixel_size();
        let x = (z.re - (-1.0 - self.half_width)) / h;
        let y = (z.im + self.half_width) / h;
        if x < 0.0 || y < 0.0 {
            return None;
        }
        let (i, j) = (x as usize, y as usize);
        (i < self.resolution && j < self.resolution).then_some((i, j))
    }

    fn flood_fill(&mut self) {
        let n = self.resolution;
        let inside = |d: &DomainU, i: usize, j: usize| cubic_p(d.pixel_center(i, j)).norm() < d.inner_radius;
        let mut filled = vec![false; n * n];
        let mut queue = VecDeque::new();
        let seed = self.pixel_of(Complex64::new(-1.0, 0.0)).expect("seed in window");
        filled[seed.1 * n + seed.0] = true;
        queue.push_back(seed);
        while let Some((i, j)) = queue.pop_front() {
            let neighbors = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
            for (a, b) in neighbors {
                if a < n && b < n && !filled[b * n + a] && inside(self, a, b) {
                    filled[b * n + a] = true;
                    queue.push_back((a, b));
                }
            }
        }
        // Dilate by one pixel so that the exact inequality decides membership near the edge.
        let mut mask = filled.clone();
        for j in 0..n {
            for i in 0..n {
                if filled[j * n + i] {
                    for (a, b) in [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)] {
                        if a < n && b < n {
                            mask[b * n + a] = true;
                        }
                    }
                }
            }
        }
        self.mask = mask;
    }

    /// Membership in the component `B` around `-1`.
    pub fn in_b(&self, z: Complex64) -> bool {
        if cubic_p(z).norm() >= self.inner_radius {
            return false;
        }
        match self.pixel_of(z) {
            Some((i, j)) => self.mask[j * self.resolution + i],
            None => false,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        if cubic_p(z).norm() >= self.outer_radius {
            return false;
        }
        if z.im == 0.0 && z.re <= -1.0 {
            return false;
        }
        !self.in_b(z)
    }

    /// Number of pixels in the filled component (after dilation).
    pub fn mask_pixels(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Writes the mask window as a binary PGM (255 = in `B`).
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let n = self.resolution;
        write!(out, "P5\n{n} {n}\n255\n")?;
        let mut buf = Vec::with_capacity(n * n);
        for j in (0..n).rev() {
            for i in 0..n {
                buf.push(if self.mask[j * n + i] { 255u8 } else { 0u8 });
            }
        }
        out.write_all(&buf)
    }
}

impl Default for DomainU {
    fn default() -> Self {
        DomainU::new(DEFAULT_MASK_RESOLUTION)
    }
}

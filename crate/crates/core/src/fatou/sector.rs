use num_complex::Complex64;
use serde::Serialize;

use super::{FatouError, FatouFrame, ThetaSpec};
use crate::prec::to_c64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorKind {
    /// `1/2 ≤ Re Φ ≤ 3/2`, `−2 < Im Φ ≤ 2`
    C,
    /// `1/2 ≤ Re Φ ≤ 3/2`, `Im Φ ≥ 2`
    Csharp,
    /// `𝒞 ∪ 𝒞♯` pulled back along the branch with 0 on its boundary.
    S0,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SectorSpec {
    pub kind: SectorKind,
    pub re_band: (f64, f64),
    pub im_band: (f64, f64),
    pub pullback_depth: usize,
}

/// Height at which the unbounded sector `𝒞♯` is truncated for sampling.
pub const CSHARP_TRUNCATION: f64 = 20.0;

impl SectorSpec {
    pub fn c() -> SectorSpec {
        SectorSpec { kind: SectorKind::C, re_band: (0.5, 1.5), im_band: (-2.0, 2.0), pullback_depth: 0 }
    }

    pub fn csharp() -> SectorSpec {
        SectorSpec { kind: SectorKind::Csharp, re_band: (0.5, 1.5), im_band: (2.0, CSHARP_TRUNCATION), pullback_depth: 0 }
    }

    pub fn s0(depth: usize) -> SectorSpec {
        SectorSpec { kind: SectorKind::S0, re_band: (0.5, 1.5), im_band: (-2.0, CSHARP_TRUNCATION), pullback_depth: depth }
    }

    /// The same sector translated so that its band is centred at `Re Φ = center`.
    pub fn translated(mut self, center: f64) -> SectorSpec {
        self.re_band = (center - 0.5, center + 0.5);
        self
    }

    /// Points on the boundary of the parameter rectangle, counter-clockwise.
    pub fn boundary_params(&self, samples: usize) -> Vec<Complex64> {
        let (r0, r1) = self.re_band;
        let (i0, i1) = self.im_band;
        let per_side = (samples / 4).max(1);
        let corners = [Complex64::new(r0, i0), Complex64::new(r1, i0), Complex64::new(r1, i1), Complex64::new(r0, i1)];
        let mut pts = Vec::with_capacity(per_side * 4);
        for k in 0..4 {
            let (a, b) = (corners[k], corners[(k + 1) % 4]);
            for j in 0..per_side {
                pts.push(a + (b - a) * (j as f64 / per_side as f64));
            }
        }
        pts
    }

    pub fn interior_params(&self, samples: usize) -> Vec<Complex64> {
        let n = (samples as f64).sqrt().ceil().max(1.0) as usize;
        let (r0, r1) = self.re_band;
        let (i0, i1) = self.im_band;
        let mut pts = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                let x = r0 + (r1 - r0) * (i as f64 + 0.5) / n as f64;
                let y = i0 + (i1 - i0) * (j as f64 + 0.5) / n as f64;
                pts.push(Complex64::new(x, y));
            }
        }
        pts
    }
}

/// Sampled sector in the dynamical plane.
#[derive(Clone, Debug, Serialize)]
pub struct SectorCloud {
    pub spec: SectorSpec,
    pub boundary: Vec<Complex64>,
    pub interior: Vec<Complex64>,
    pub diameter: f64,
}

impl SectorCloud {
    /// Winding number of the boundary polygon around `z`.
    pub fn winding_number(&self, z: Complex64) -> i64 {
        let mut total = 0.0;
        let n = self.boundary.len();
        for k in 0..n {
            let a = self.boundary[k] - z;
            let b = self.boundary[(k + 1) % n] - z;
            total += (b / a).arg();
        }
        (total / (2.0 * std::f64::consts::PI)).round() as i64
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.winding_number(z) != 0
    }

    /// Euclidean distance from `z` to the nearest sample.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.boundary.iter().chain(&self.interior).map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min)
    }

    /// CSV with columns `part,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("part,re,im\n");
        for p in &self.boundary {
            s.push_str(&format!("boundary,{:e},{:e}\n", p.re, p.im));
        }
        for p in &self.interior {
            s.push_str(&format!("interior,{:e},{:e}\n", p.re, p.im));
        }
        s
    }
}

fn diameter(pts: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

impl FatouFrame {
    /// Lift of a sector point: `Φ^{-1}(ζ)`, then for pullbacks `F^{-k}(Φ^{-1}(ζ) + 1/α)`.
    pub fn sector_lift(&self, spec: &SectorSpec, zeta: Complex64) -> Result<rug::Complex, FatouError> {
        let w = self.phi_inverse_unchecked(&self.c(zeta.re, zeta.im))?;
        if spec.kind != SectorKind::S0 || spec.pullback_depth == 0 {
            return Ok(w);
        }
        let mut v = w + &self.lift.inv_alpha;
        for _ in 0..spec.pullback_depth {
            v = self.lift.lift_f_inverse(&v).map_err(|_| FatouError::PullbackBranchLost)?;
        }
        Ok(v)
    }

    fn sector_point(&self, spec: &SectorSpec, zeta: Complex64) -> Result<Complex64, FatouError> {
        let w = self.sector_lift(spec, zeta)?;
        Ok(to_c64(&self.lift.tau(&w)?))
    }

    /// Samples the sector's boundary and interior in the dynamical plane.
    pub fn sector_extract(&self, spec: &SectorSpec, samples: usize) -> Result<SectorCloud, FatouError> {
        use rayon::prelude::*;
        let bparams = spec.boundary_params(samples);
        let iparams = spec.interior_params(samples);
        let boundary: Vec<Result<_, _>> = bparams.par_iter().map(|&z| self.sector_point(spec, z)).collect();
        let boundary = boundary.into_iter().collect::<Result<Vec<_>, _>>()?;
        let interior: Vec<Result<_, _>> = iparams.par_iter().map(|&z| self.sector_point(spec, z)).collect();
        let interior = interior.into_iter().collect::<Result<Vec<_>, _>>()?;
        let diameter = diameter(&boundary);
        Ok(SectorCloud { spec: *spec, boundary, interior, diameter })
    }

    /// Smallest `k ≥ 0` such that `Φ^{-1}` is valid on `Re ζ = ⌊1/α⌋ − k` at all sampled heights:
    /// the inverse exists, round-trips, and lands in `Θ(R)` for the fitted radius.
    pub fn fit_k(&self, heights: &[f64]) -> Option<usize> {
        let inv = 1.0 / self.alpha_f64();
        let top = inv.floor() as usize;
        let theta = ThetaSpec::new(self.fit.radius.unwrap_or(0.0), self.alpha_f64());
        (0..=top).find(|&k| {
            let re = (top - k) as f64;
            heights.iter().all(|&h| {
                let zeta = self.c(re, h);
                let Ok(w) = self.phi_inverse_unchecked(&zeta) else { return false };
                if !theta.contains(to_c64(&w)) {
                    return false;
                }
                match self.phi(&w) {
                    Ok(back) => (to_c64(&back) - Complex64::new(re, h)).norm() < 1e-10,
                    Err(_) => false,
                }
            })
        })
    }

    /// Least pullback depth `k` with every boundary sample of `𝒞 ∪ 𝒞♯` landing at
    /// `0 < Re Φ < ⌊1/α⌋ − k_fit` after `F^{-k}(Φ^{-1}(ζ) + 1/α)`.
    pub fn fit_k_h(&self, k_fit: usize, samples: usize, max_depth: usize) -> Option<usize> {
        let right = (1.0 / self.alpha_f64()).floor() - k_fit as f64;
        let params = SectorSpec::s0(0).boundary_params(samples);
        (0..=max_depth).find(|&k| {
            let spec = SectorSpec::s0(k);
            params.iter().all(|&z| {
                let lifted = if k == 0 {
                    self.phi_inverse_unchecked(&self.c(z.re, z.im)).map(|w| w + &self.lift.inv_alpha)
                } else {
                    self.sector_lift(&spec, z)
                };
                match lifted.and_then(|w| self.phi(&w)) {
                    Ok(v) => {
                        let re = v.real().to_f64();
                        re > 0.0 && re < right
                    }
                    Err(_) => false,
                }
            })
        })
    }
}

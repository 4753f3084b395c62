use num_complex::Complex64;
use serde::Serialize;

/// `Θ(R) = ℂ \ ⋃_n T_α^n(B(0,R))`, the complement of the deck orbit of the disk of radius `R`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaSpec {
    pub r: f64,
    pub alpha: f64,
}

impl ThetaSpec {
    pub fn new(r: f64, alpha: f64) -> ThetaSpec {
        ThetaSpec { r, alpha }
    }

    /// Distance from `w` to the nearest deck translate `n/α` of the pole.
    pub fn pole_distance(&self, w: Complex64) -> f64 {
        let n = (w.re * self.alpha).round();
        (w - Complex64::new(n / self.alpha, 0.0)).norm()
    }

    pub fn contains(&self, w: Complex64) -> bool {
        self.pole_distance(w) >= self.r
    }
}

/// `Σ_Q`: the vertical strip `Q ≤ Re w ≤ 1/α − Q` together with two wedges around the poles.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SigmaStrip {
    pub q: f64,
    pub alpha: f64,
}

impl SigmaStrip {
    pub fn new(q: f64, alpha: f64) -> SigmaStrip {
        SigmaStrip { q, alpha }
    }

    pub fn contains(&self, w: Complex64) -> bool {
        let (q, top) = (self.q, 1.0 / self.alpha);
        let strip = q <= w.re && w.re <= top - q;
        let left = w.re <= q && w.im.abs() >= -w.re + 2.0 * q;
        let right = w.re >= top - q && w.im.abs() >= w.re - top + 2.0 * q;
        strip || left || right
    }
}

pub fn theta_contains(spec: &ThetaSpec, w: Complex64) -> bool {
    spec.contains(w)
}

pub fn sigma_contains(strip: &SigmaStrip, w: Complex64) -> bool {
    strip.contains(w)
}

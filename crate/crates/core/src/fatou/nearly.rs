use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{Lift, ThetaSpec};
use crate::prec::{abs_f64, cx};
use crate::report::{Check, Relation, VerifyReport};

pub const NEAR_TRANSLATION_BOUND: f64 = 0.25;

/// Polar sampling of one fundamental domain of `T_α` around the pole at 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PolarGrid {
    pub radii: usize,
    pub angles: usize,
    /// Smallest radius sampled.
    pub r_min: f64,
    /// Largest radius, in units of `1/α`.
    pub r_max_over_inv_alpha: f64,
}

impl Default for PolarGrid {
    fn default() -> Self {
        PolarGrid { radii: 96, angles: 128, r_min: 0.5, r_max_over_inv_alpha: 10.0 }
    }
}

impl PolarGrid {
    pub fn doubled(&self) -> PolarGrid {
        PolarGrid { radii: self.radii * 2, angles: self.angles * 2, ..*self }
    }

    fn radius(&self, i: usize, r_lo: f64, r_hi: f64) -> f64 {
        if self.radii <= 1 {
            return r_lo;
        }
        r_lo * (r_hi / r_lo).powf(i as f64 / (self.radii - 1) as f64)
    }

    /// Sample points `ρ e^{iθ}` with `ρ ∈ [r_lo, r_hi]`, kept when `|Re w| ≤ 1/(2α)`; each point
    /// carries its radius index.
    pub fn points(&self, alpha: f64, r_lo: f64) -> Vec<(usize, Complex64)> {
        let half = 0.5 / alpha;
        let r_hi = (self.r_max_over_inv_alpha / alpha).max(r_lo);
        let mut pts = Vec::new();
        for i in 0..self.radii.max(1) {
            let rho = self.radius(i, r_lo, r_hi);
            for j in 0..self.angles.max(1) {
                let th = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / self.angles.max(1) as f64;
                let w = Complex64::from_polar(rho, th);
                if w.re.abs() <= half {
                    pts.push((i, w));
                }
            }
        }
        pts
    }
}

/// Deviation of `F` from the unit translation at one point.
#[derive(Clone, Copy, Debug)]
pub struct Deviation {
    pub w: Complex64,
    pub value: f64,
    pub derivative: f64,
    pub cut_margin: f64,
}

impl Deviation {
    pub fn worst(&self) -> f64 {
        self.value.max(self.derivative)
    }
}

pub fn deviation(lift: &Lift, w: Complex64) -> Deviation {
    let p = lift.prec;
    let wc = cx(p, w.re, w.im);
    match lift.eval(&wc) {
        Ok(e) => {
            let d = abs_f64(&(e.f - wc - 1u32));
            let dd = abs_f64(&(e.df - 1u32));
            Deviation { w, value: d, derivative: dd, cut_margin: e.cut_margin }
        }
        Err(_) => Deviation { w, value: f64::INFINITY, derivative: f64::INFINITY, cut_margin: 0.0 },
    }
}

pub fn deviations(lift: &Lift, pts: &[Complex64]) -> Vec<Deviation> {
    pts.par_iter().map(|&w| deviation(lift, w)).collect()
}

/// Result of fitting the least radius `R` with `|F − (w+1)| < 1/4` and `|F′ − 1| < 1/4` on `Θ(R)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NearTranslationFit {
    pub radius: Option<f64>,
    pub grid: PolarGrid,
    pub samples: usize,
}

/// Fits the least radius on `grid`: the smallest sampled ring beyond which every sample passes,
/// refined by bisection on circles between that ring and the previous one.
pub fn fit_near_translation(lift: &Lift, grid: &PolarGrid) -> NearTranslationFit {
    let alpha = lift.alpha_f64();
    let pts = grid.points(alpha, grid.r_min);
    let ws: Vec<Complex64> = pts.iter().map(|p| p.1).collect();
    let devs = deviations(lift, &ws);
    let mut ring_max = vec![0.0f64; grid.radii.max(1)];
    for ((i, _), d) in pts.iter().zip(&devs) {
        ring_max[*i] = ring_max[*i].max(d.worst());
    }
    let mut first_ok = None;
    for i in (0..ring_max.len()).rev() {
        if ring_max[i] < NEAR_TRANSLATION_BOUND {
            first_ok = Some(i);
        } else {
            break;
        }
    }
    let samples = pts.len();
    let Some(i0) = first_ok else {
        return NearTranslationFit { radius: None, grid: *grid, samples };
    };
    let r_hi_all = (grid.r_max_over_inv_alpha / alpha).max(grid.r_min);
    let mut hi = grid.radius(i0, grid.r_min, r_hi_all);
    if i0 == 0 {
        return NearTranslationFit { radius: Some(hi), grid: *grid, samples };
    }
    let mut lo = grid.radius(i0 - 1, grid.r_min, r_hi_all);
    let circle_ok = |r: f64| -> bool {
        let half = 0.5 / alpha;
        let ws: Vec<Complex64> = (0..grid.angles.max(1))
            .map(|j| Complex64::from_polar(r, 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / grid.angles.max(1) as f64))
            .filter(|w| w.re.abs() <= half)
            .collect();
        deviations(lift, &ws).iter().all(|d| d.worst() < NEAR_TRANSLATION_BOUND)
    };
    for _ in 0..20 {
        let mid = (lo * hi).sqrt();
        if circle_ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    NearTranslationFit { radius: Some(hi), grid: *grid, samples }
}

/// Deviation sups on the sampled `Θ(R)` fundamental domain, together with the least constant
/// making the exponential decay bound hold on `Θ(r/α + 1)`.
pub fn near_translation_report(lift: &Lift, region: &ThetaSpec, grid: &PolarGrid, r_band: f64) -> VerifyReport {
    let alpha = lift.alpha_f64();
    let mut report = VerifyReport::new(
        "near-translation",
        format!("Theta(R={:.6}) fundamental domain, |Re w| <= 1/(2 alpha), alpha={alpha}, map={}", region.r, lift.map.name()),
        lift.prec,
    );
    let pts: Vec<Complex64> = grid.points(alpha, region.r.max(1e-9)).into_iter().map(|p| p.1).collect();
    let devs = deviations(lift, &pts);
    report.samples = devs.len();
    let sup_value = devs.iter().map(|d| d.value).fold(0.0, f64::max);
    let sup_deriv = devs.iter().map(|d| d.derivative).fold(0.0, f64::max);
    let min_margin = devs.iter().map(|d| d.cut_margin).fold(f64::INFINITY, f64::min);

    let decay_r = r_band / alpha + 1.0;
    let mut c3: f64 = 0.0;
    let mut decay_samples = 0;
    for d in &devs {
        if ThetaSpec::new(decay_r, alpha).contains(d.w) {
            let scale = (alpha / r_band) * (-2.0 * std::f64::consts::PI * alpha * d.w.im).exp();
            c3 = c3.max(d.worst() / scale);
            decay_samples += 1;
        }
    }
    report.push(Check::new("sup |F(w)-(w+1)|", sup_value, Relation::Below, NEAR_TRANSLATION_BOUND));
    report.push(Check::new("sup |F'(w)-1|", sup_deriv, Relation::Below, NEAR_TRANSLATION_BOUND));
    report.push(Check::new("branch cut margin", min_margin, Relation::AtLeast, super::BRANCH_CUT_MARGIN));
    report.fit("C3", c3);
    report.fit("C3_band_r", r_band);
    report.fit("C3_samples", decay_samples as f64);
    report.fit("R", region.r);
    report
}

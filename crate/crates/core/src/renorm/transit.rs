use std::sync::Arc;

use num_complex::Complex64;
use rug::{Complex, Float};
use serde::Serialize;

use super::RenormError;
use crate::cf::expand_cf;
use crate::dynamics::{exp_lift, exp_project, DynError, MapSpec};
use crate::fatou::{FatouFrame, FrameConfig};
use crate::prec::{abs_f64, from_c64, to_c64};
use crate::report::{Check, Relation, VerifyReport};

/// Radii probed, largest first, when measuring the validated disk.
pub const VALIDATION_RADII: [f64; 9] = [0.2, 0.1, 0.05, 0.02, 0.01, 5e-3, 2e-3, 1e-3, 1e-4];
const VALIDATION_ANGLES: usize = 16;

/// `ℛ(h)` near 0: lift by the conjugated exponential, read the Fatou coordinate, follow the
/// orbit of `F` until it re-enters the fundamental strip one period to the right, and project.
///
/// When the first reduction step of `1/α` rounds up, the result is additionally conjugated by
/// `z ↦ z̄` so that the rotation number at 0 is positive.
#[derive(Clone, Debug)]
pub struct RenormMap {
    frame: Arc<FatouFrame>,
    flip: bool,
    validated_radius: f64,
    max_return: usize,
}

impl RenormMap {
    pub fn new(frame: Arc<FatouFrame>, flip: bool, max_return: usize) -> RenormMap {
        let max_return = if max_return == 0 { frame.max_steps } else { max_return };
        RenormMap { frame, flip, validated_radius: f64::INFINITY, max_return }
    }

    pub fn frame(&self) -> &FatouFrame {
        &self.frame
    }

    pub fn parent_alpha(&self) -> f64 {
        self.frame.alpha_f64()
    }

    pub fn flipped(&self) -> bool {
        self.flip
    }

    pub fn validated_radius(&self) -> f64 {
        self.validated_radius
    }

    pub fn with_validated_radius(mut self, r: f64) -> RenormMap {
        self.validated_radius = r;
        self
    }

    /// `ℛ(h)(ζ)` and the number of `F` steps taken before the return.
    pub fn eval_traced(&self, zeta: &Complex) -> Result<(Complex, usize), RenormError> {
        if zeta.is_zero() {
            return Err(RenormError::ZeroInput);
        }
        let radius = abs_f64(zeta);
        if radius > self.validated_radius {
            return Err(RenormError::DiskTooLarge { radius, validated: self.validated_radius });
        }
        let fr = &self.frame;
        let p = fr.prec();
        let z = if self.flip { Complex::with_val(p, zeta.conj_ref()) } else { zeta.clone() };
        let xi = exp_lift(&z, 0, true).map_err(crate::fatou::FatouError::from)?;
        let x = Complex::with_val(p, &xi - &fr.normalization_shift);
        let n = Float::with_val(p, x.real().floor_ref());
        let x = x - &n;
        let mut v = fr.g(&x)?;
        let a = fr.base_a.to_f64();
        for j in 1..=self.max_return {
            v = fr.lift.lift_f(&v)?;
            let y = Complex::with_val(p, &v - &fr.lift.inv_alpha);
            let re = y.real().to_f64();
            if re < a - 1.5 || re > a + 2.5 {
                continue;
            }
            let Ok(sp) = fr.g_inverse(&y) else { continue };
            if sp.s >= 0 && sp.s < 1 {
                let landed = Complex::with_val(p, (sp.s, sp.t)) + &fr.normalization_shift;
                let out = exp_project(&landed);
                let out = if self.flip { Complex::with_val(p, out.conj_ref()) } else { out };
                return Ok((out, j));
            }
        }
        Err(RenormError::NoReturn { steps: self.max_return })
    }

    pub fn eval(&self, zeta: &Complex) -> Result<Complex, DynError> {
        self.eval_traced(zeta).map(|(z, _)| z).map_err(|e| match e {
            RenormError::DiskTooLarge { validated, .. } => DynError::OutsideDomain { radius: validated },
            other => DynError::Renorm(other.to_string()),
        })
    }

    /// Largest radius in [`VALIDATION_RADII`] on whose circle every sampled evaluation succeeds.
    pub fn measure_validated_radius(&self) -> f64 {
        let p = self.frame.prec();
        let probe = RenormMap { validated_radius: f64::INFINITY, ..self.clone() };
        VALIDATION_RADII
            .iter()
            .copied()
            .find(|&r| {
                (0..VALIDATION_ANGLES).all(|k| {
                    let z = Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / VALIDATION_ANGLES as f64);
                    probe.eval_traced(&from_c64(p, z)).is_ok()
                })
            })
            .unwrap_or(0.0)
    }
}

/// Anything with a fixed point at 0 whose rotation number can be measured.
pub trait RotationSource {
    fn step(&self, z: Complex64) -> Result<Complex64, RenormError>;
}

impl RotationSource for RenormMap {
    fn step(&self, z: Complex64) -> Result<Complex64, RenormError> {
        self.eval_traced(&from_c64(self.frame.prec(), z)).map(|(w, _)| to_c64(&w))
    }
}

/// `z ↦ e^{2πiβ} z`.
#[derive(Clone, Copy, Debug)]
pub struct LinearStub {
    pub beta: f64,
}

impl RotationSource for LinearStub {
    fn step(&self, z: Complex64) -> Result<Complex64, RenormError> {
        Ok(Complex64::from_polar(1.0, std::f64::consts::TAU * self.beta) * z)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RotationEstimate {
    /// Mean angular increment in turns, in `(−1/2, 1/2]`.
    pub value: f64,
    pub steps: usize,
    pub radius: f64,
    pub final_radius: f64,
    /// Set when only one increment was sampled.
    pub low_confidence: bool,
}

/// Average angular increment of `src` along the orbit of `radius`, unwrapped step by step.
pub fn rotation_number_estimate(src: &dyn RotationSource, radius: f64, steps: usize) -> Result<RotationEstimate, RenormError> {
    let steps = steps.max(1);
    let mut z = Complex64::new(radius, 0.0);
    let mut total = 0.0;
    for _ in 0..steps {
        let next = src.step(z)?;
        total += (next / z).arg();
        z = next;
    }
    Ok(RotationEstimate {
        value: total / steps as f64 / std::f64::consts::TAU,
        steps,
        radius,
        final_radius: z.norm(),
        low_confidence: steps == 1,
    })
}

/// Mean of `arg(ℛ(ζ)/ζ)/2π` on circles, and its linear extrapolation to radius 0.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplierSecant {
    pub radii: Vec<f64>,
    pub means: Vec<f64>,
    pub extrapolated: f64,
    pub return_times: Vec<usize>,
}

pub fn multiplier_secant(map: &RenormMap, radii: &[f64], angles: usize) -> Result<MultiplierSecant, RenormError> {
    use rayon::prelude::*;
    let p = map.frame.prec();
    let mut means = Vec::with_capacity(radii.len());
    let mut return_times = Vec::new();
    for &r in radii {
        let samples: Vec<(f64, usize)> = (0..angles.max(1))
            .into_par_iter()
            .map(|k| {
                let z = Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.5) / angles.max(1) as f64);
                let (w, j) = map.eval_traced(&from_c64(p, z))?;
                Ok(((to_c64(&w) / z).arg() / std::f64::consts::TAU, j))
            })
            .collect::<Vec<Result<_, RenormError>>>()
            .into_iter()
            .collect::<Result<Vec<_>, _>>()?;
        means.push(samples.iter().map(|s| s.0).sum::<f64>() / samples.len() as f64);
        return_times.extend(samples.iter().map(|s| s.1));
    }
    let extrapolated = match (radii, means.as_slice()) {
        ([.., r1, r2], [.., m1, m2]) if r1 != r2 => m2 - (m1 - m2) * r2 / (r1 - r2),
        _ => means.last().copied().unwrap_or(f64::NAN),
    };
    Ok(MultiplierSecant { radii: radii.to_vec(), means, extrapolated, return_times })
}

#[derive(Clone, Debug)]
pub struct RenormOptions {
    pub frame: FrameConfig,
    /// Starting radius of the rotation orbit.
    pub radius: f64,
    pub steps: usize,
    pub secant_radii: Vec<f64>,
    pub secant_angles: usize,
    /// Cap on the return time; 0 uses the frame's landing cap.
    pub max_return: usize,
    /// Heights on which the inverse coordinate is validated when fitting `k`.
    pub k_heights: Vec<f64>,
    pub sector_samples: usize,
    pub max_pullback: usize,
}

impl Default for RenormOptions {
    fn default() -> Self {
        RenormOptions {
            frame: FrameConfig::default(),
            radius: 1e-3,
            steps: 100,
            secant_radii: vec![1e-3, 1e-4],
            secant_angles: 16,
            max_return: 0,
            k_heights: (0..=11).map(|i| -2.0 + 2.0 * i as f64).collect(),
            sector_samples: 48,
            max_pullback: 40,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RenormResult {
    pub map: RenormMap,
    /// `α_1 = |1/α − round(1/α)|`.
    pub child_alpha_expected: f64,
    /// Sign of `1/α − round(1/α)`.
    pub child_sign: i8,
    pub k_fit: Option<usize>,
    pub k_h: Option<usize>,
    pub validated_disk: f64,
    pub rotation: Option<RotationEstimate>,
    pub secant: Option<MultiplierSecant>,
    pub errors: Vec<String>,
}

impl RenormResult {
    pub fn parent(&self) -> &FatouFrame {
        self.map.frame()
    }

    pub fn rotation_estimate(&self) -> Option<f64> {
        self.rotation.as_ref().map(|r| r.value)
    }

    /// Wraps the renormalized map as a member of the map family.
    pub fn as_map_spec(&self) -> MapSpec {
        let prec = self.parent().prec();
        MapSpec::new(
            crate::dynamics::MapKind::NumericalRenorm(Arc::new(self.map.clone())),
            Float::with_val(prec, self.child_alpha_expected),
        )
    }
}

/// Builds the frame, the renormalized map, its validated disk, and the rotation measurements.
pub fn renormalize(map: MapSpec, opts: &RenormOptions) -> Result<RenormResult, RenormError> {
    let cf = expand_cf(&map.alpha, 1)?;
    let (child, sign) = match (cf.alpha_seq.get(1), cf.eps.get(1)) {
        (Some(a), Some(&e)) => (a.to_f64(), e),
        _ => (0.0, 1),
    };
    let frame = FatouFrame::calibrate(map, &opts.frame)?;
    let k_fit = frame.fit_k(&opts.k_heights);
    let k_h = frame.fit_k_h(k_fit.unwrap_or(0), opts.sector_samples, opts.max_pullback);
    let rmap = RenormMap::new(Arc::new(frame), sign < 0, opts.max_return);
    let validated = rmap.measure_validated_radius();
    let rmap = rmap.with_validated_radius(validated);
    let mut errors = Vec::new();
    let rotation = match rotation_number_estimate(&rmap, opts.radius, opts.steps) {
        Ok(r) => Some(r),
        Err(e) => {
            errors.push(format!("rotation: {e}"));
            None
        }
    };
    let secant = match multiplier_secant(&rmap, &opts.secant_radii, opts.secant_angles) {
        Ok(s) => Some(s),
        Err(e) => {
            errors.push(format!("secant: {e}"));
            None
        }
    };
    Ok(RenormResult {
        map: rmap,
        child_alpha_expected: child,
        child_sign: sign,
        k_fit,
        k_h,
        validated_disk: validated,
        rotation,
        secant,
        errors,
    })
}

/// Rotation contract, multiplier contract and return-time window for one renormalization.
pub fn return_window_report(result: &RenormResult, rotation_tolerance: f64, secant_tolerance: f64) -> VerifyReport {
    let alpha = result.parent().alpha_f64();
    let mut report = VerifyReport::new(
        "renormalization",
        format!(
            "alpha={alpha}, map={}, validated disk {:e}, rotation orbit from radius {:e}",
            result.parent().map().name(),
            result.validated_disk,
            result.rotation.as_ref().map(|r| r.radius).unwrap_or(f64::NAN)
        ),
        result.parent().prec(),
    );
    let expected = result.child_alpha_expected;
    let rot = result.rotation_estimate().unwrap_or(f64::NAN);
    report.push(Check::new("|rotation - child alpha|", (rot - expected).abs(), Relation::Below, rotation_tolerance));
    if let Some(r) = &result.rotation {
        if r.low_confidence {
            report.flag("LOW_CONFIDENCE");
        }
        report.samples += r.steps;
    }
    let sec = result.secant.as_ref().map(|s| s.extrapolated).unwrap_or(f64::NAN);
    report.push(Check::new("|secant multiplier - child alpha|", (sec - expected).abs(), Relation::Below, secant_tolerance));
    report.push(Check::new("child alpha in (0, 1/2)", expected, Relation::Below, 0.5));
    report.push(Check::new("child alpha > 0", expected, Relation::Above, 0.0));
    report.push(Check::new("validated disk radius", result.validated_disk, Relation::AtLeast, 1e-3));

    let times = result.secant.as_ref().map(|s| s.return_times.clone()).unwrap_or_default();
    let top = (1.0 / alpha).floor() as i64 - result.k_fit.map(|k| k as i64).unwrap_or(0)
        + result.k_h.map(|k| k as i64).unwrap_or(0)
        + 1;
    let lo = times.iter().copied().min().unwrap_or(0) as f64;
    let hi = times.iter().copied().max().unwrap_or(0) as f64;
    report.push(Check::new("min return time", lo, Relation::AtLeast, 2.0));
    // Without a first-return offset the upper end of the window is undefined.
    match result.k_h {
        Some(_) => {
            report.push(Check::new("max return time", hi, Relation::AtMost, top as f64));
        }
        None => {
            report.flag("K_H_UNFITTED");
        }
    }
    if result.parent().base_fallback {
        report.flag("BASE_LINE_FALLBACK");
    }
    report.fit("rotation_estimate", rot);
    report.fit("secant_extrapolated", sec);
    report.fit("child_alpha_expected", expected);
    report.fit("k_fit", result.k_fit.map(|k| k as f64).unwrap_or(f64::NAN));
    report.fit("k_h", result.k_h.map(|k| k as f64).unwrap_or(f64::NAN));
    for e in &result.errors {
        report.flag(format!("ERROR: {e}"));
    }
    report
}

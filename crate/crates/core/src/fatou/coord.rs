use std::sync::Arc;

use num_complex::Complex64;
use rug::{Complex, Float};
use serde::Serialize;

use super::{fit_near_translation, FatouError, Lift, NearTranslationFit, PolarGrid};
use crate::dynamics::{DomainU, MapSpec};
use crate::prec::{abs, abs_f64, cx, to_c64};

/// How the base line `l_a = {a + it}` is chosen.
#[derive(Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseChoice {
    /// `a = R + 1` for the fitted near-translation radius `R`, or the midpoint `1/(2α) − 1/2`
    /// when that is not admissible.
    Fitted,
    Fixed(f64),
}

#[derive(Clone, Debug)]
pub struct FrameConfig {
    pub base: BaseChoice,
    pub grid: PolarGrid,
    /// Cap on forward or backward `F` steps when landing in the fundamental strip.
    pub max_steps: usize,
    pub newton_iters: usize,
    pub domain: Option<Arc<DomainU>>,
}

impl Default for FrameConfig {
    fn default() -> Self {
        FrameConfig { base: BaseChoice::Fitted, grid: PolarGrid::default(), max_steps: 0, newton_iters: 60, domain: None }
    }
}

/// Solution of `g(s + it) = v` in the fundamental strip.
#[derive(Clone, Debug)]
pub struct StripPoint {
    pub s: Float,
    pub t: Float,
    /// `Im(conj(∂_s g) ∂_t g)`, positive where `g` preserves orientation.
    pub jacobian: f64,
}

/// `τ`, `F`, the base line, and the quasi-conformal Fatou coordinate built from the
/// interpolation `g(s + it) = (1 − s)(a + it) + s F(a + it)` between `l_a` and `F(l_a)`.
#[derive(Clone, Debug)]
pub struct FatouFrame {
    pub lift: Lift,
    pub base_a: Float,
    pub cp_lift: Complex,
    pub normalization_shift: Complex,
    pub fit: NearTranslationFit,
    /// True when the fitted base line was not admissible and the midpoint was used.
    pub base_fallback: bool,
    pub max_steps: usize,
    pub newton_iters: usize,
}

impl FatouFrame {
    pub fn calibrate(map: MapSpec, config: &FrameConfig) -> Result<FatouFrame, FatouError> {
        let lift = Lift::new(map, config.domain.clone())?;
        let fit = fit_near_translation(&lift, &config.grid);
        FatouFrame::with_fit(lift, fit, config)
    }

    /// Builds the frame from an existing near-translation fit.
    pub fn with_fit(lift: Lift, fit: NearTranslationFit, config: &FrameConfig) -> Result<FatouFrame, FatouError> {
        let alpha = lift.alpha_f64();
        let inv = 1.0 / alpha;
        let midpoint = 0.5 * inv - 0.5;
        let (a, fallback) = match config.base {
            BaseChoice::Fixed(a) => (a, false),
            BaseChoice::Fitted => match fit.radius {
                Some(r) if r + 1.0 <= inv - r - 1.25 => (r + 1.0, false),
                _ => (midpoint, true),
            },
        };
        let prec = lift.prec;
        let cp_lift = lift.critical_lift()?;
        let max_steps = if config.max_steps == 0 { (4.0 * inv) as usize + 100 } else { config.max_steps };
        let mut frame = FatouFrame {
            base_a: Float::with_val(prec, a),
            cp_lift,
            normalization_shift: cx(prec, 0.0, 0.0),
            lift,
            fit,
            base_fallback: fallback,
            max_steps,
            newton_iters: config.newton_iters,
        };
        let raw = frame.phi(&frame.cp_lift.clone())?;
        frame.normalization_shift = -raw;
        Ok(frame)
    }

    pub fn prec(&self) -> u32 {
        self.lift.prec
    }

    pub fn alpha_f64(&self) -> f64 {
        self.lift.alpha_f64()
    }

    pub fn map(&self) -> &MapSpec {
        &self.lift.map
    }

    pub fn c(&self, re: f64, im: f64) -> Complex {
        cx(self.prec(), re, im)
    }

    fn base_point(&self, t: &Float) -> Complex {
        Complex::with_val(self.prec(), (&self.base_a, t))
    }

    /// `g(s + it)`.
    pub fn g(&self, x: &Complex) -> Result<Complex, FatouError> {
        let p = self.prec();
        let b = self.base_point(x.imag());
        let fb = self.lift.lift_f(&b)?;
        let s = x.real();
        let one_minus = Float::with_val(p, 1u32 - s);
        Ok(b * &one_minus + fb * s)
    }

    /// `(∂_s g, ∂_t g)` at `s + it`, together with `F(a + it)` and `F′(a + it)`.
    fn g_partials(&self, s: &Float, t: &Float) -> Result<(Complex, Complex, Complex), FatouError> {
        let p = self.prec();
        let b = self.base_point(t);
        let e = self.lift.eval(&b)?;
        let gs = Complex::with_val(p, &e.f - &b);
        let one_minus = Float::with_val(p, 1u32 - s);
        // ∂_t g = i(1 − s) + s·i·F′(a + it)
        let gt = (Complex::with_val(p, (0, &one_minus)) + Complex::with_val(p, &e.df * s).mul_i(false)).clone();
        let g = b * &one_minus + Complex::with_val(p, &e.f * s);
        Ok((g, gs, gt))
    }

    /// Dilatation `|g_w̄ / g_w|` at `s + it`, with
    /// `g_w = ½(F − (a+it) + 1 + s(F′ − 1))`, `g_w̄ = ½(F − (a+it) − 1 + s(1 − F′))`.
    pub fn dilatation(&self, s: f64, t: f64) -> Result<f64, FatouError> {
        let p = self.prec();
        let tf = Float::with_val(p, t);
        let b = self.base_point(&tf);
        let e = self.lift.eval(&b)?;
        let d = Complex::with_val(p, &e.f - &b);
        let fp1 = Complex::with_val(p, &e.df - 1u32) * s;
        let gw = Complex::with_val(p, &d + 1u32) + &fp1;
        let gwb = Complex::with_val(p, &d - 1u32) - &fp1;
        Ok((abs(&gwb) / abs(&gw)).to_f64())
    }

    /// Inverts `g` by damped Newton iteration in `(s, t)`.
    pub fn g_inverse(&self, v: &Complex) -> Result<StripPoint, FatouError> {
        let p = self.prec();
        let tol = self.lift.tolerance();
        let mut s = Float::with_val(p, v.real() - &self.base_a);
        let mut t = v.imag().clone();
        let mut last = f64::INFINITY;
        for _ in 0..self.newton_iters {
            let (g, gs, gt) = self.g_partials(&s, &t)?;
            let r = Complex::with_val(p, &g - v);
            let res = abs(&r);
            // Solve [Re gs, Re gt; Im gs, Im gt] (ds, dt) = −r.
            let det = Float::with_val(p, gs.real() * gt.imag()) - Float::with_val(p, gs.imag() * gt.real());
            if det.is_zero() {
                break;
            }
            let ds = -(Float::with_val(p, r.real() * gt.imag()) - Float::with_val(p, r.imag() * gt.real())) / &det;
            let dt = -(Float::with_val(p, gs.real() * r.imag()) - Float::with_val(p, gs.imag() * r.real())) / &det;
            let step_size = Float::with_val(p, ds.abs_ref()).max(&Float::with_val(p, dt.abs_ref()));
            let damp = if step_size > 1.0 { Float::with_val(p, step_size.recip_ref()) } else { Float::with_val(p, 1) };
            s += ds * &damp;
            t += dt * &damp;
            last = res.to_f64();
            if step_size < tol && res < Float::with_val(p, &tol * 16u32) {
                return Ok(StripPoint { jacobian: det.to_f64(), s, t });
            }
        }
        // A final residual check catches iterations that stalled at roundoff level.
        let (g, gs, gt) = self.g_partials(&s, &t)?;
        let res = abs(&Complex::with_val(p, &g - v));
        if res < Float::with_val(p, &tol * 16u32) {
            let det = Float::with_val(p, gs.real() * gt.imag()) - Float::with_val(p, gs.imag() * gt.real());
            return Ok(StripPoint { jacobian: det.to_f64(), s, t });
        }
        Err(FatouError::InversionFailed { residual: last.min(res.to_f64()) })
    }

    /// Steps `w` forward or backward under `F` until it lands in the fundamental strip;
    /// returns the landing coordinate and the signed step count.
    pub fn land(&self, w: &Complex) -> Result<(StripPoint, i64), FatouError> {
        let a = self.base_a.to_f64();
        let mut v = w.clone();
        let mut m: i64 = 0;
        for _ in 0..=self.max_steps {
            let re = v.real().to_f64();
            if re < a - 1.5 {
                v = self.lift.lift_f(&v)?;
                m += 1;
                continue;
            }
            if re > a + 2.5 {
                v = self.lift.lift_f_inverse(&v)?;
                m -= 1;
                continue;
            }
            let sp = self.g_inverse(&v)?;
            if sp.s < 0 {
                v = self.lift.lift_f(&v)?;
                m += 1;
            } else if sp.s >= 1 {
                v = self.lift.lift_f_inverse(&v)?;
                m -= 1;
            } else {
                return Ok((sp, m));
            }
        }
        Err(FatouError::Unreachable { steps: self.max_steps })
    }

    /// `Φ(w) = g^{-1}(F^m(w)) − m + shift`.
    pub fn phi(&self, w: &Complex) -> Result<Complex, FatouError> {
        let (sp, m) = self.land(w)?;
        let p = self.prec();
        let x = Complex::with_val(p, (sp.s, sp.t));
        Ok(x - m + &self.normalization_shift)
    }

    /// `Φ^{-1}(ζ)` without any band restriction.
    pub fn phi_inverse_unchecked(&self, zeta: &Complex) -> Result<Complex, FatouError> {
        let p = self.prec();
        let x = Complex::with_val(p, zeta - &self.normalization_shift);
        let n = Float::with_val(p, x.real().floor_ref());
        let frac = Complex::with_val(p, (Float::with_val(p, x.real() - &n), x.imag()));
        let mut v = self.g(&frac)?;
        let n = n.to_f64() as i64;
        if n.unsigned_abs() as usize > self.max_steps {
            return Err(FatouError::Unreachable { steps: self.max_steps });
        }
        for _ in 0..n.max(0) {
            v = self.lift.lift_f(&v)?;
        }
        for _ in 0..(-n).max(0) {
            v = self.lift.lift_f_inverse(&v)?;
        }
        Ok(v)
    }

    /// `Φ^{-1}(ζ)` for `ζ` in the image band `0 ≤ Re ζ ≤ band_right`.
    pub fn phi_inverse(&self, zeta: &Complex, band_right: f64) -> Result<Complex, FatouError> {
        let re = zeta.real().to_f64();
        if !(0.0..=band_right).contains(&re) {
            return Err(FatouError::OutsideImageBand { re, right: band_right });
        }
        self.phi_inverse_unchecked(zeta)
    }

    /// `|Φ(F(w)) − Φ(w) − 1|`.
    pub fn abel_residual(&self, w: &Complex) -> Result<f64, FatouError> {
        let fw = self.lift.lift_f(w)?;
        let a = self.phi(&fw)?;
        let b = self.phi(w)?;
        Ok(abs_f64(&(a - b - 1u32)))
    }

    pub fn tau_c64(&self, w: &Complex) -> Result<Complex64, FatouError> {
        self.lift.tau(w).map(|z| to_c64(&z))
    }
}

use std::sync::Arc;

use num_complex::Complex64;
use rug::{Complex, Float};

use super::FatouError;
use crate::dynamics::{DomainU, MapKind, MapSpec};
use crate::prec::{abs, abs_f64, arg, cx, epsilon, pi, to_c64, two_pi_i};

/// Escape bound used as the domain of the quadratic map.
pub const QUADRATIC_DOMAIN_RADIUS: f64 = 2.0;
/// Minimum angular distance from the branch cut of the logarithm in `F`.
pub const BRANCH_CUT_MARGIN: f64 = 1e-6;

/// `τ`, `F` and their derivatives for one polynomial map; no calibration data.
#[derive(Clone, Debug)]
pub struct Lift {
    pub map: MapSpec,
    pub prec: u32,
    pub alpha: Float,
    pub inv_alpha: Float,
    pub sigma: Complex,
    pub u0: Complex,
    /// `2πiα`
    tpia: Complex,
    lambda: Complex,
    domain: Option<Arc<DomainU>>,
}

/// Value and derivative of `F` at one point, plus diagnostics.
#[derive(Clone, Debug)]
pub struct LiftEval {
    pub f: Complex,
    pub df: Complex,
    pub z: Complex,
    /// Angular distance of the logarithm's argument from the branch cut.
    pub cut_margin: f64,
}

impl Lift {
    pub fn new(map: MapSpec, domain: Option<Arc<DomainU>>) -> Result<Lift, FatouError> {
        if !map.is_polynomial() {
            return Err(FatouError::UnsupportedMap);
        }
        let prec = map.prec;
        let sigma = map.sigma_fixed_point()?;
        let u0 = map.u_at_zero()?;
        let alpha = map.alpha.clone();
        let inv_alpha = Float::with_val(prec, alpha.recip_ref());
        let tpia = two_pi_i(prec) * &alpha;
        let lambda = map.lambda.clone();
        let domain = match map.kind {
            MapKind::CubicModel => Some(domain.unwrap_or_else(|| Arc::new(DomainU::default()))),
            _ => None,
        };
        Ok(Lift { map, prec, alpha, inv_alpha, sigma, u0, tpia, lambda, domain })
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn inv_alpha_f64(&self) -> f64 {
        self.inv_alpha.to_f64()
    }

    pub fn c(&self, re: f64, im: f64) -> Complex {
        cx(self.prec, re, im)
    }

    /// `e^{-2πiαw}`
    fn deck_exp(&self, w: &Complex) -> Complex {
        let e = Complex::with_val(self.prec, w * &self.tpia);
        (-e).exp()
    }

    /// `τ(w) = σ/(1 − e^{−2πiαw})`.
    pub fn tau(&self, w: &Complex) -> Result<Complex, FatouError> {
        let e = self.deck_exp(w);
        let den = Complex::with_val(self.prec, 1u32 - &e);
        if abs(&den) < epsilon(self.prec) * 16u32 {
            return Err(FatouError::PoleHit);
        }
        Ok(Complex::with_val(self.prec, &self.sigma / &den))
    }

    /// `τ′(w) = −2πiα σ E/(1 − E)²` with `E = e^{−2πiαw}`.
    pub fn tau_prime(&self, w: &Complex) -> Result<Complex, FatouError> {
        let e = self.deck_exp(w);
        let den = Complex::with_val(self.prec, 1u32 - &e);
        if abs(&den) < epsilon(self.prec) * 16u32 {
            return Err(FatouError::PoleHit);
        }
        let num = Complex::with_val(self.prec, &self.tpia * &self.sigma) * e;
        Ok(-num / den.square())
    }

    /// The lift of `z` under `τ` on deck branch `k`.
    pub fn tau_inverse(&self, z: &Complex, k: i64) -> Result<Complex, FatouError> {
        if z.is_zero() {
            return Err(FatouError::PoleHit);
        }
        let q = Complex::with_val(self.prec, &self.sigma / z);
        let y = Complex::with_val(self.prec, 1u32 - q);
        if y.is_zero() {
            return Err(FatouError::PoleHit);
        }
        let w = -(y.ln() / &self.tpia);
        Ok(w + Float::with_val(self.prec, &self.inv_alpha * k))
    }

    pub fn in_domain(&self, z: &Complex) -> bool {
        match &self.domain {
            Some(d) => d.contains(to_c64(z)),
            None => {
                let r = abs_f64(z);
                r.is_finite() && r <= QUADRATIC_DOMAIN_RADIUS
            }
        }
    }

    pub fn domain(&self) -> Option<&Arc<DomainU>> {
        self.domain.as_ref()
    }

    fn u(&self, z: &Complex) -> Complex {
        match self.map.kind {
            MapKind::CubicModel => {
                let s = Complex::with_val(self.prec, z + &self.sigma) + 2u32;
                Complex::with_val(self.prec, &self.lambda * s)
            }
            _ => self.c(1.0, 0.0),
        }
    }

    fn u_prime(&self) -> Complex {
        match self.map.kind {
            MapKind::CubicModel => self.lambda.clone(),
            _ => self.c(0.0, 0.0),
        }
    }

    /// `F(w) = w + 1 + Log(X/λ)/(2πiα)` with `X = 1 − σu(z)/(1 + z u(z))`, `z = τ(w)`, and `F′(w)`.
    ///
    /// The logarithm is the principal one applied to `X/λ`, whose argument vanishes where
    /// `F` is close to the translation by one.
    pub fn eval(&self, w: &Complex) -> Result<LiftEval, FatouError> {
        let p = self.prec;
        let e = self.deck_exp(w);
        let den = Complex::with_val(p, 1u32 - &e);
        if abs(&den) < epsilon(p) * 16u32 {
            return Err(FatouError::PoleHit);
        }
        let z = Complex::with_val(p, &self.sigma / &den);
        if !self.in_domain(&z) {
            return Err(FatouError::DomainExit);
        }
        let u = self.u(&z);
        let one_zu = Complex::with_val(p, &z * &u) + 1u32;
        if one_zu.is_zero() {
            return Err(FatouError::DomainExit);
        }
        let x = Complex::with_val(p, 1u32 - Complex::with_val(p, &self.sigma * &u) / &one_zu);
        if abs(&x) < epsilon(p) * 1024u32 {
            return Err(FatouError::DomainExit);
        }
        let y = Complex::with_val(p, &x / &self.lambda);
        let cut_margin = (pi(53).to_f64() - arg(&y).to_f64().abs()).abs();
        if cut_margin < BRANCH_CUT_MARGIN {
            return Err(FatouError::BranchCutHit { margin: cut_margin });
        }
        let log = y.ln();
        let f = Complex::with_val(p, w + 1u32) + Complex::with_val(p, &log / &self.tpia);

        // X′ = −σ(u′ − u²)/(1 + zu)², τ′ = −2πiα σ E/(1 − E)²
        let du = self.u_prime();
        let xp = -(Complex::with_val(p, &du - Complex::with_val(p, u.square_ref())) * &self.sigma) / Complex::with_val(p, one_zu.square_ref());
        let taup = -(Complex::with_val(p, &self.tpia * &self.sigma) * &e) / den.square();
        let df = Complex::with_val(p, xp * taup) / x / &self.tpia + 1u32;
        Ok(LiftEval { f, df, z, cut_margin })
    }

    pub fn lift_f(&self, w: &Complex) -> Result<Complex, FatouError> {
        self.eval(w).map(|e| e.f)
    }

    pub fn lift_f_prime(&self, w: &Complex) -> Result<Complex, FatouError> {
        self.eval(w).map(|e| e.df)
    }

    /// Solves `F(u) = v` by Newton's method from `u = v − 1`.
    pub fn lift_f_inverse(&self, v: &Complex) -> Result<Complex, FatouError> {
        let p = self.prec;
        let tol = self.tolerance();
        let mut u = Complex::with_val(p, v - 1u32);
        for _ in 0..80 {
            let e = self.eval(&u)?;
            let r = Complex::with_val(p, &e.f - v);
            let step = r / &e.df;
            let size = abs(&step);
            u -= step;
            if size < tol {
                return Ok(u);
            }
        }
        Err(FatouError::InversionFailed { residual: abs_f64(&Complex::with_val(p, self.lift_f(&u)? - v)) })
    }

    /// Convergence tolerance for Newton solves at this precision.
    pub fn tolerance(&self) -> Float {
        epsilon(self.prec) * 256u32
    }

    /// `|h(τ(w)) − τ(F(w))|`.
    pub fn semiconjugacy_residual(&self, w: &Complex) -> Result<Float, FatouError> {
        let e = self.eval(w)?;
        let lhs = self.map.eval(&e.z)?;
        let rhs = self.tau(&e.f)?;
        Ok(abs(&Complex::with_val(self.prec, lhs - rhs)))
    }

    /// Lift of the tracked critical point with real part in `[0, 1/α)`.
    pub fn critical_lift(&self) -> Result<Complex, FatouError> {
        let cp = self.map.main_critical_point()?;
        let w = self.tau_inverse(&cp, 0)?;
        let period = &self.inv_alpha;
        let k = Float::with_val(self.prec, w.real() / period).floor();
        let shift = Float::with_val(self.prec, &k * period);
        Ok(w - shift)
    }

    pub fn to_c64(&self, z: &Complex) -> Complex64 {
        to_c64(z)
    }
}

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rug::{Complex, Float};

use super::DynError;
use crate::prec::{abs, cis_turns, cx, from_c64, to_c64};
use crate::renorm::RenormMap;

#[derive(Clone)]
pub enum MapKind {
    /// `e^{2πiα} z + z²`
    Quadratic,
    /// `e^{2πiα} z (1+z)²`
    CubicModel,
    /// A renormalization return map evaluated numerically.
    NumericalRenorm(Arc<RenormMap>),
}

impl fmt::Debug for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Quadratic => write!(f, "Quadratic"),
            MapKind::CubicModel => write!(f, "CubicModel"),
            MapKind::NumericalRenorm(r) => write!(f, "NumericalRenorm(parent α={})", r.parent_alpha()),
        }
    }
}

/// One member of the implemented family at a fixed rotation number and precision.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub kind: MapKind,
    pub alpha: Float,
    pub lambda: Complex,
    pub prec: u32,
}

impl MapSpec {
    pub fn new(kind: MapKind, alpha: Float) -> MapSpec {
        let prec = alpha.prec();
        let lambda = cis_turns(&alpha);
        MapSpec { kind, alpha, lambda, prec }
    }

    pub fn quadratic(alpha: f64, prec: u32) -> MapSpec {
        MapSpec::new(MapKind::Quadratic, Float::with_val(prec, alpha))
    }

    pub fn cubic(alpha: f64, prec: u32) -> MapSpec {
        MapSpec::new(MapKind::CubicModel, Float::with_val(prec, alpha))
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            MapKind::Quadratic => "quadratic",
            MapKind::CubicModel => "cubic",
            MapKind::NumericalRenorm(_) => "renorm",
        }
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64()
    }

    pub fn is_polynomial(&self) -> bool {
        !matches!(self.kind, MapKind::NumericalRenorm(_))
    }

    pub fn eval(&self, z: &Complex) -> Result<Complex, DynError> {
        match &self.kind {
            MapKind::Quadratic => Ok(Complex::with_val(self.prec, &self.lambda * z) + Complex::with_val(self.prec, z.square_ref())),
            MapKind::CubicModel => {
                let one_plus = Complex::with_val(self.prec, z + 1u32);
                Ok(Complex::with_val(self.prec, &self.lambda * z) * one_plus.square())
            }
            MapKind::NumericalRenorm(r) => r.eval(z),
        }
    }

    pub fn eval_f64(&self, z: Complex64) -> Result<Complex64, DynError> {
        let lam = to_c64(&self.lambda);
        match &self.kind {
            MapKind::Quadratic => Ok(lam * z + z * z),
            MapKind::CubicModel => Ok(lam * z * (1.0 + z) * (1.0 + z)),
            MapKind::NumericalRenorm(r) => r.eval(&from_c64(self.prec, z)).map(|w| to_c64(&w)),
        }
    }

    /// `h′(z)`; polynomial kinds only.
    pub fn derivative(&self, z: &Complex) -> Result<Complex, DynError> {
        let p = self.prec;
        match self.kind {
            MapKind::Quadratic => Ok(Complex::with_val(p, z * 2u32) + &self.lambda),
            MapKind::CubicModel => {
                // λ(1+z)(1+3z)
                let a = Complex::with_val(p, z + 1u32);
                let b = Complex::with_val(p, z * 3u32) + 1u32;
                Ok(Complex::with_val(p, &self.lambda * a) * b)
            }
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("derivative of a numerical renormalization")),
        }
    }

    /// `h″(0)`.
    pub fn second_derivative_at_zero(&self) -> Result<Complex, DynError> {
        match self.kind {
            MapKind::Quadratic => Ok(cx(self.prec, 2.0, 0.0)),
            MapKind::CubicModel => Ok(Complex::with_val(self.prec, &self.lambda * 4u32)),
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("second derivative of a numerical renormalization")),
        }
    }

    pub fn critical_points(&self) -> Result<Vec<Complex>, DynError> {
        match self.kind {
            MapKind::Quadratic => Ok(vec![Complex::with_val(self.prec, &self.lambda / -2i32)]),
            MapKind::CubicModel => Ok(vec![
                Complex::with_val(self.prec, (Float::with_val(self.prec, -1) / 3u32, 0)),
                cx(self.prec, -1.0, 0.0),
            ]),
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("critical points of a numerical renormalization")),
        }
    }

    /// The critical point whose orbit the renormalization tracks (`-λ/2` or `-1/3`).
    pub fn main_critical_point(&self) -> Result<Complex, DynError> {
        self.critical_points().map(|mut v| v.swap_remove(0))
    }

    fn check_nonparabolic(&self) -> Result<(), DynError> {
        let frac = Float::with_val(self.prec, self.alpha.fract_ref());
        if frac.is_zero() {
            return Err(DynError::ParabolicCase);
        }
        Ok(())
    }

    /// The nonzero fixed point tending to 0 as `α → 0`.
    pub fn sigma_fixed_point(&self) -> Result<Complex, DynError> {
        self.check_nonparabolic()?;
        let p = self.prec;
        match self.kind {
            MapKind::Quadratic => Ok(Complex::with_val(p, 1u32 - &self.lambda)),
            MapKind::CubicModel => {
                let half = Float::with_val(p, &self.alpha / -2i32);
                Ok(cis_turns(&half) - 1u32)
            }
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("fixed point of a numerical renormalization")),
        }
    }

    /// `u_h` in `h(z) = z + z(z − σ) u_h(z)`, closed form.
    pub fn u(&self, z: &Complex) -> Result<Complex, DynError> {
        let p = self.prec;
        match self.kind {
            MapKind::Quadratic => Ok(cx(p, 1.0, 0.0)),
            MapKind::CubicModel => {
                let sigma = self.sigma_fixed_point()?;
                let s = Complex::with_val(p, z + &sigma) + 2u32;
                Ok(Complex::with_val(p, &self.lambda * s))
            }
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("u of a numerical renormalization")),
        }
    }

    /// `u_h′(z)`.
    pub fn u_prime(&self, _z: &Complex) -> Result<Complex, DynError> {
        match self.kind {
            MapKind::Quadratic => Ok(cx(self.prec, 0.0, 0.0)),
            MapKind::CubicModel => Ok(self.lambda.clone()),
            MapKind::NumericalRenorm(_) => Err(DynError::Unsupported("u of a numerical renormalization")),
        }
    }

    /// `u_h(z)` from the quotient `(h(z) − z)/(z(z − σ))`, falling back to the closed form
    /// within `10^-8` of the removable singularities.
    pub fn u_quotient(&self, z: &Complex) -> Result<Complex, DynError> {
        let sigma = self.sigma_fixed_point()?;
        let near = |c: &Complex| abs(&Complex::with_val(self.prec, z - c)).to_f64() < 1e-8;
        if near(&cx(self.prec, 0.0, 0.0)) || near(&sigma) {
            return self.u(z);
        }
        let num = self.eval(z)? - z;
        let den = Complex::with_val(self.prec, z - &sigma) * z;
        Ok(num / den)
    }

    /// `u_h(0) = (1 − e^{2πiα})/σ_h`.
    pub fn u_at_zero(&self) -> Result<Complex, DynError> {
        let sigma = self.sigma_fixed_point()?;
        Ok(Complex::with_val(self.prec, 1u32 - &self.lambda) / sigma)
    }
}

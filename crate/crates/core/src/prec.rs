//! Small helpers around `rug` so the numerical modules stay readable.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complex, Float};

/// Default working precision for dynamical computations.
pub const DYN_BITS: u32 = 128;
/// Default working precision for continued-fraction expansion.
pub const CF_BITS: u32 = 256;

pub fn fl(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn cx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2πi` as a complex number.
pub fn two_pi_i(prec: u32) -> Complex {
    Complex::with_val(prec, (0, pi(prec) * 2u32))
}

/// `e^{2πi x}` for real `x`.
pub fn cis_turns(x: &Float) -> Complex {
    let prec = x.prec();
    let angle = Float::with_val(prec, x * pi(prec)) * 2u32;
    let (s, c) = angle.sin_cos(Float::new(prec));
    Complex::with_val(prec, (c, s))
}

pub fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub fn abs_f64(z: &Complex) -> f64 {
    abs(z).to_f64()
}

pub fn arg(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.arg_ref())
}

pub fn to_c64(z: &Complex) -> num_complex::Complex64 {
    num_complex::Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

pub fn from_c64(prec: u32, z: num_complex::Complex64) -> Complex {
    cx(prec, z.re, z.im)
}

/// `2^{-k}` at the given precision.
pub fn pow2_neg(prec: u32, k: i32) -> Float {
    Float::with_val(prec, 2u32).pow(-k)
}

/// Working epsilon `2^{1-prec}`.
pub fn epsilon(prec: u32) -> Float {
    pow2_neg(prec, prec as i32 - 1)
}

/// Rounds `x` to the nearest integer, ties to even.
pub fn round_even(x: &Float) -> Float {
    let mut r = x.clone();
    r.round_even_mut();
    r
}

pub fn is_finite(z: &Complex) -> bool {
    z.real().is_finite() && z.imag().is_finite()
}

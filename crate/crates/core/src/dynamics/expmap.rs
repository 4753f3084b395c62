use rug::{Complex, Float};

use super::DynError;
use crate::prec::{pi, two_pi_i};

/// `𝔼xp(w) = −(4/27) e^{−2πi w̄}`.
pub fn exp_project(w: &Complex) -> Complex {
    let p = w.prec().0;
    let e = Complex::with_val(p, w.conj_ref()) * two_pi_i(p);
    let e = (-e).exp();
    e * Float::with_val(p, -4) / 27u32
}

/// `−(4/27) e^{2πi w}`, the projection without the conjugation.
pub fn exp_project_plain(w: &Complex) -> Complex {
    let p = w.prec().0;
    let e = (Complex::with_val(p, w * two_pi_i(p))).exp();
    e * Float::with_val(p, -4) / 27u32
}

/// A preimage of `z` under [`exp_project`] (or [`exp_project_plain`] when `conjugate` is false);
/// distinct branches differ by integers.
pub fn exp_lift(z: &Complex, branch: i64, conjugate: bool) -> Result<Complex, DynError> {
    if z.is_zero() {
        return Err(DynError::ZeroNotInImage);
    }
    let p = z.prec().0;
    let y = Complex::with_val(p, z * -27i32) / 4u32;
    let log = y.ln();
    let w = if conjugate {
        // e^{−2πi w̄} = y  ⇔  w̄ = i·Log(y)/(2π)
        let wbar = Complex::with_val(p, log.mul_i_ref(false)) / (pi(p) * 2u32);
        Complex::with_val(p, wbar.conj_ref())
    } else {
        log / two_pi_i(p)
    };
    Ok(w + branch)
}

use rug::{Float, Integer, Rational};

use super::CfError;
use crate::prec::{pow2_neg, round_even};

/// Levels with `α_n` below `2^-RATIONAL_FLOOR_BITS` are treated as the end of a rational expansion.
pub const RATIONAL_FLOOR_BITS: i32 = 40;
/// Bits of `α_n` that must remain trustworthy before another level is computed.
const GUARD_BITS: i32 = 16;

/// Nearest-integer continued fraction `α = a_0 + ε_0 α_0`, `1/α_{n-1} = a_n + ε_n α_n`.
///
/// Index `n` of `a`, `eps` and `alpha_seq` refers to level `n`; `depth` is the largest level computed.
#[derive(Clone, Debug)]
pub struct ModifiedCF {
    pub a: Vec<Integer>,
    pub eps: Vec<i8>,
    pub alpha_seq: Vec<Float>,
    /// Propagated absolute error bound on each `α_n`.
    pub error_bound: Vec<f64>,
    pub depth: usize,
    pub terminated: bool,
    pub prec: u32,
}

/// Splits `x` into its nearest integer (ties to even), sign and distance.
fn nearest(x: &Float) -> (Integer, i8, Float) {
    let n = round_even(x);
    let d = Float::with_val(x.prec(), x - &n);
    let eps = if d.is_sign_negative() && !d.is_zero() { -1 } else { 1 };
    let a = n.to_integer().expect("finite");
    (a, eps, d.abs())
}

/// Expands `alpha` to `depth` levels at the precision carried by `alpha`.
pub fn expand_cf(alpha: &Float, depth: usize) -> Result<ModifiedCF, CfError> {
    if !alpha.is_finite() {
        return Err(CfError::NonFinite);
    }
    let prec = alpha.prec();
    let floor = pow2_neg(prec, RATIONAL_FLOOR_BITS);
    let ulp = |x: &Float| -> f64 {
        let m = x.to_f64().abs().max(1.0);
        m * pow2_neg(64, prec as i32 - 1).to_f64()
    };

    let (a0, e0, al0) = nearest(alpha);
    let mut cf = ModifiedCF {
        error_bound: vec![ulp(alpha) * 2.0],
        a: vec![a0],
        eps: vec![e0],
        alpha_seq: vec![],
        depth: 0,
        terminated: false,
        prec,
    };
    if al0 < floor {
        cf.alpha_seq.push(Float::new(prec));
        cf.terminated = true;
        return Ok(cf);
    }
    cf.alpha_seq.push(al0);

    for n in 1..=depth {
        let prev = &cf.alpha_seq[n - 1];
        let y = Float::with_val(prec, prev.recip_ref());
        let (an, en, aln) = nearest(&y);
        let p = prev.to_f64();
        let err = cf.error_bound[n - 1] / (p * p) + ulp(&y);
        cf.a.push(an);
        cf.eps.push(en);
        cf.error_bound.push(err);
        cf.depth = n;
        if aln < floor {
            cf.alpha_seq.push(Float::new(prec));
            cf.terminated = true;
            return Ok(cf);
        }
        let trusted = Float::with_val(prec, &aln * pow2_neg(prec, GUARD_BITS));
        if err > trusted.to_f64() {
            return Err(CfError::PrecisionExhausted { level: n, bits: prec });
        }
        cf.alpha_seq.push(aln);
    }
    Ok(cf)
}

/// Expands with automatic precision doubling; `source(bits)` must return α at that precision.
pub fn expand_cf_auto<F>(source: F, depth: usize, start_bits: u32, max_bits: u32) -> Result<ModifiedCF, CfError>
where
    F: Fn(u32) -> Float,
{
    let mut bits = start_bits;
    loop {
        match expand_cf(&source(bits), depth) {
            Err(CfError::PrecisionExhausted { .. }) if bits < max_bits => bits = (bits * 2).min(max_bits),
            other => return other,
        }
    }
}

impl ModifiedCF {
    /// Builds the expansion from explicit partial quotients and signs, evaluating the tails
    /// `α_n` at `prec` bits (the tail beyond the last level is taken as 0). Quotients that no
    /// nearest-integer expansion produces, such as 1, are accepted for bookkeeping.
    pub fn from_quotients(a: &[Integer], eps: &[i8], prec: u32) -> Result<ModifiedCF, CfError> {
        if a.is_empty() || eps.len() != a.len() {
            return Err(CfError::MalformedQuotients("a and eps must be nonempty and of equal length".into()));
        }
        for (i, ai) in a.iter().enumerate().skip(1) {
            if *ai < 1 {
                return Err(CfError::MalformedQuotients(format!("level {i}: a={ai} is not positive")));
            }
        }
        let depth = a.len() - 1;
        let mut alpha = vec![Float::new(prec); depth + 1];
        for n in (0..depth).rev() {
            let t = Float::with_val(prec, &alpha[n + 1] * i32::from(eps[n + 1]));
            alpha[n] = Float::with_val(prec, (t + &a[n + 1]).recip_ref());
        }
        Ok(ModifiedCF {
            a: a.to_vec(),
            eps: eps.to_vec(),
            error_bound: vec![0.0; depth + 1],
            alpha_seq: alpha,
            depth,
            terminated: false,
            prec,
        })
    }

    /// The number `a_0 + ε_0 α_0` rebuilt from levels `0..=n` with `α_n` set to 0.
    pub fn reconstruct(&self, n: usize) -> Rational {
        let n = n.min(self.depth);
        let mut tail = Rational::new();
        for k in (1..=n).rev() {
            let denom = Rational::from(&self.a[k]) + Rational::from(self.eps[k]) * tail;
            tail = denom.recip();
        }
        Rational::from(&self.a[0]) + Rational::from(self.eps[0]) * tail
    }

    /// Largest `|1/α_{n-1} − a_n − ε_n α_n|` over computed levels.
    pub fn max_level_residual(&self) -> Float {
        let mut worst = Float::new(self.prec);
        for n in 1..=self.depth {
            let lhs = Float::with_val(self.prec, self.alpha_seq[n - 1].recip_ref());
            let rhs = Float::with_val(self.prec, &self.alpha_seq[n] * i32::from(self.eps[n])) + &self.a[n];
            let r = Float::with_val(self.prec, lhs - rhs).abs();
            if r > worst {
                worst = r;
            }
        }
        worst
    }

    /// `∏_{i<n} α_i`, the reconstruction error scale at depth `n`.
    pub fn tail_product(&self, n: usize) -> Float {
        let mut p = Float::with_val(self.prec, 1);
        for al in self.alpha_seq.iter().take(n.min(self.alpha_seq.len())) {
            p *= al;
        }
        p
    }

    pub fn alpha_f64(&self, n: usize) -> f64 {
        self.alpha_seq[n].to_f64()
    }

    /// True iff every computed `a_i` with `i ≥ 1` is at least `n`.
    pub fn is_irr_n(&self, n: i64) -> bool {
        self.a.iter().skip(1).all(|ai| *ai >= n)
    }
}

/// Value of a classical continued fraction `[0; c_1, c_2, …]` with the given head and a
/// constant tail, accurate to `prec` bits.
pub fn classical_cf_value(head: &[u64], tail: u64, prec: u32) -> Float {
    let tail_len = (prec as usize) * 2 + 8;
    let mut x = Float::new(prec);
    let seq = head.iter().copied().chain(std::iter::repeat(tail).take(tail_len)).collect::<Vec<_>>();
    for c in seq.iter().rev() {
        x = Float::with_val(prec, (x + *c).recip_ref());
    }
    x
}

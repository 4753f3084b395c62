use rug::{Float, Integer};
use serde::Serialize;

use super::{approximants, CfError, ModifiedCF};

/// Brjuno sums, `β_j` products and the iterated-exponent product sequence of one expansion.
///
/// `partial_sums[n] = Σ_{j≤n} ln q_{j+1}/q_j`; `beta[j+1] = β_j` with `beta[0] = β_{-1} = 1`;
/// `alt_sums[n] = Σ_{j≤n} β_{j-1} ln(1/α_j)`; `product_seq[k-1]` is the product up to `α_k`,
/// with its logarithm in `log_product_seq` since the value itself underflows quickly.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BrjunoLedger {
    pub partial_sums: Vec<f64>,
    pub beta: Vec<f64>,
    pub alt_sums: Vec<f64>,
    pub product_seq: Vec<f64>,
    pub log_product_seq: Vec<f64>,
    /// `q_n β_{n-1}` for `n ≥ 1`.
    pub q_beta: Vec<f64>,
}

/// `Σ_{j=0}^{n} ln q_{j+1}/q_j` over explicit denominators.
pub fn brjuno_partial_from_q(q: &[Integer], n: usize) -> Result<f64, CfError> {
    if q.len() < n + 2 {
        return Err(CfError::DepthExceeded { needed: n + 1, available: q.len().saturating_sub(1) });
    }
    let prec = 128;
    let mut sum = Float::new(prec);
    for j in 0..=n {
        let ln_next = Float::with_val(prec, &q[j + 1]).ln();
        sum += ln_next / Float::with_val(prec, &q[j]);
    }
    Ok(sum.to_f64())
}

pub fn brjuno_partial(cf: &ModifiedCF, n: usize) -> Result<f64, CfError> {
    brjuno_partial_from_q(&approximants(cf).q, n)
}

/// `ln(α_1 · α_2^{α_1} ⋯ α_k^{α_1⋯α_{k-1}})`.
pub fn log_product_sequence(cf: &ModifiedCF, k: usize) -> Result<f64, CfError> {
    let avail = usable_alpha_levels(cf);
    if k == 0 || k > avail {
        return Err(CfError::DepthExceeded { needed: k, available: avail });
    }
    let prec = cf.prec;
    let mut weight = Float::with_val(prec, 1);
    let mut log = Float::new(prec);
    for al in &cf.alpha_seq[1..=k] {
        log += Float::with_val(prec, al.ln_ref()) * &weight;
        weight *= al;
    }
    Ok(log.to_f64())
}

pub fn product_sequence(cf: &ModifiedCF, k: usize) -> Result<f64, CfError> {
    log_product_sequence(cf, k).map(f64::exp)
}

/// Levels `n ≥ 1` whose `α_n` is nonzero.
fn usable_alpha_levels(cf: &ModifiedCF) -> usize {
    cf.alpha_seq.iter().skip(1).take_while(|a| !a.is_zero()).count()
}

impl BrjunoLedger {
    /// Exact-denominator ledger of a materialized expansion (plain `q` convention).
    pub fn from_cf(cf: &ModifiedCF) -> BrjunoLedger {
        let prec = cf.prec;
        let q = approximants(cf).q;
        let mut ledger = BrjunoLedger::default();

        let mut sum = Float::new(prec);
        for j in 0..q.len().saturating_sub(1) {
            let ln_next = Float::with_val(prec, &q[j + 1]).ln();
            sum += ln_next / Float::with_val(prec, &q[j]);
            ledger.partial_sums.push(sum.to_f64());
        }

        let nonzero = cf.alpha_seq.iter().take_while(|a| !a.is_zero()).count();
        let mut beta = Float::with_val(prec, 1);
        let mut alt = Float::new(prec);
        ledger.beta.push(1.0);
        for j in 0..nonzero {
            let al = &cf.alpha_seq[j];
            alt += Float::with_val(prec, al.recip_ref()).ln() * &beta;
            ledger.alt_sums.push(alt.to_f64());
            if j >= 1 && j < q.len() {
                let qb = Float::with_val(prec, &q[j]) * &beta;
                ledger.q_beta.push(qb.to_f64());
            }
            beta *= al;
            ledger.beta.push(beta.to_f64());
        }

        let mut weight = Float::with_val(prec, 1);
        let mut log = Float::new(prec);
        for al in cf.alpha_seq.iter().take(nonzero).skip(1) {
            log += Float::with_val(prec, al.ln_ref()) * &weight;
            weight *= al;
            ledger.log_product_seq.push(log.to_f64());
            ledger.product_seq.push(log.to_f64().exp());
        }
        ledger
    }

    pub fn partial(&self, n: usize) -> Result<f64, CfError> {
        self.partial_sums
            .get(n)
            .copied()
            .ok_or(CfError::DepthExceeded { needed: n + 1, available: self.partial_sums.len() })
    }

    pub fn log_product(&self, k: usize) -> Result<f64, CfError> {
        if k == 0 {
            return Err(CfError::DepthExceeded { needed: 0, available: self.log_product_seq.len() });
        }
        self.log_product_seq
            .get(k - 1)
            .copied()
            .ok_or(CfError::DepthExceeded { needed: k, available: self.log_product_seq.len() })
    }
}

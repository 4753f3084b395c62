//! Nearest-integer continued fractions, convergent denominators, Brjuno sums and the
//! iterated-exponent product sequence.

mod approx;
mod brjuno;
mod expand;
pub mod rule;

pub use approx::{approximants, approximants_with, Approximants, Convention};
pub use brjuno::{brjuno_partial, brjuno_partial_from_q, log_product_sequence, product_sequence, BrjunoLedger};
pub use expand::{classical_cf_value, expand_cf, expand_cf_auto, ModifiedCF, RATIONAL_FLOOR_BITS};

use serde::Serialize;

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum CfError {
    #[error("precision exhausted at level {level} with {bits} bits")]
    PrecisionExhausted { level: usize, bits: u32 },
    #[error("requested level {needed} but only {available} levels are available")]
    DepthExceeded { needed: usize, available: usize },
    #[error("input is not a finite number")]
    NonFinite,
    #[error("malformed partial quotients: {0}")]
    MalformedQuotients(String),
}

/// True iff every computed `a_i` (`i ≥ 1`) is at least `n`.
pub fn is_irr_n(cf: &ModifiedCF, n: i64) -> bool {
    cf.is_irr_n(n)
}

/// JSON form of an expansion together with its ledger.
#[derive(Debug, Serialize)]
pub struct CfDocument {
    pub a: Vec<String>,
    pub eps: Vec<i8>,
    pub alpha: Vec<String>,
    pub q: Vec<String>,
    pub brjuno_partials: Vec<f64>,
    pub product_seq: Vec<f64>,
    pub depth: usize,
    pub terminated: bool,
    pub precision_bits: u32,
}

impl CfDocument {
    pub fn new(cf: &ModifiedCF) -> CfDocument {
        let ledger = BrjunoLedger::from_cf(cf);
        let digits = (f64::from(cf.prec) * std::f64::consts::LOG10_2) as usize;
        CfDocument {
            a: cf.a.iter().map(|x| x.to_string()).collect(),
            eps: cf.eps.clone(),
            alpha: cf.alpha_seq.iter().map(|x| x.to_string_radix(10, Some(digits))).collect(),
            q: approximants(cf).q.iter().map(|x| x.to_string()).collect(),
            brjuno_partials: ledger.partial_sums,
            product_seq: ledger.product_seq,
            depth: cf.depth,
            terminated: cf.terminated,
            precision_bits: cf.prec,
        }
    }
}

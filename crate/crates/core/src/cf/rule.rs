//! Rule-generated expansions whose partial quotients may be far too large to materialize.
//!
//! Quantities are carried in ratio form: `1/q_j`, `q_{j-1}/q_j`, `ln a_{j+1}/q_j` and
//! `μ_j = α_1⋯α_{j-1} q_j`, all of which stay bounded (or go to zero) even when `q_j` is a
//! tower of exponentials. All signs `ε_n` are `+1`.

use rug::{Float, Integer};
use serde::Serialize;

use super::BrjunoLedger;

/// Natural-log size above which a partial quotient is kept only through `ln a / q`.
const MATERIALIZE_LOG_LIMIT: f64 = 4096.0;

#[derive(Clone, Debug)]
pub enum Quotient {
    Exact(Integer),
    /// `ln a_{j+1} / q_j`, for a quotient with `1/a_{j+1}` below f64 range.
    Asymptotic { log_ratio: f64 },
}

/// What a rule sees when producing `a_{j+1}`.
pub struct LevelView<'a> {
    pub j: usize,
    /// `q_j` when it is still materialized.
    pub q: Option<&'a Integer>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientRule {
    /// `a_1, a_2, …` cycles through `period`.
    Periodic { period: Vec<u64> },
    /// `a_n = n + offset`.
    Linear { offset: u64 },
    /// `a_n = base^n`.
    Geometric { base: u64 },
    /// `a_{j+1} = ⌈e^{c q_j}⌉`.
    SuperExp { c: f64 },
    /// `a_{j+1} = ⌈e^{c q_j}⌉` on odd `j`, `filler` on even `j`.
    Spiked { c: f64, filler: u64 },
}

fn exp_ceil(c: f64, q: &Integer) -> Quotient {
    let qf = q.to_f64();
    let log_a = c * qf;
    if !log_a.is_finite() || log_a > MATERIALIZE_LOG_LIMIT {
        return Quotient::Asymptotic { log_ratio: c };
    }
    let bits = (log_a / std::f64::consts::LN_2) as u32 + 128;
    let x = Float::with_val(bits, Float::with_val(bits, q) * c).exp();
    let mut a = x.ceil().to_integer().expect("finite");
    if a < 2 {
        a = Integer::from(2);
    }
    Quotient::Exact(a)
}

impl QuotientRule {
    pub fn next(&self, view: &LevelView<'_>) -> Quotient {
        let n = view.j + 1;
        match self {
            QuotientRule::Periodic { period } => Quotient::Exact(Integer::from(period[(n - 1) % period.len()])),
            QuotientRule::Linear { offset } => Quotient::Exact(Integer::from(n as u64 + offset)),
            QuotientRule::Geometric { base } => Quotient::Exact(Integer::from(Integer::u_pow_u(*base as u32, n as u32))),
            QuotientRule::SuperExp { c } => match view.q {
                Some(q) => exp_ceil(*c, q),
                None => Quotient::Asymptotic { log_ratio: *c },
            },
            QuotientRule::Spiked { c, filler } => {
                if view.j % 2 == 1 {
                    match view.q {
                        Some(q) => exp_ceil(*c, q),
                        None => Quotient::Asymptotic { log_ratio: *c },
                    }
                } else {
                    Quotient::Exact(Integer::from(*filler))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Level {
    /// `ln a / q_j` for the quotient following level `j`.
    log_ratio: f64,
    /// `1/a`, zero once out of f64 range.
    inv_a: f64,
}

/// Ratio-form ledger for `α = [0; a_1, a_2, …]` generated by `rule` (all `ε = +1`).
///
/// Produces `depth` Brjuno partial sums and product-sequence terms.
pub fn ledger_from_rule(rule: &QuotientRule, depth: usize) -> (BrjunoLedger, Vec<Quotient>) {
    let extra = 12;
    let total = depth + extra;
    let mut quotients = Vec::with_capacity(total);
    let mut levels = Vec::with_capacity(total);

    // Forward pass: quotients a_1..a_total and the ratio data for q.
    let mut q_prev = Integer::from(0);
    let mut q_cur: Option<Integer> = Some(Integer::from(1));
    let mut inv_q = vec![1.0f64];
    let mut s = vec![0.0f64];
    let mut x = vec![0.0f64];
    for j in 0..total {
        let quot = rule.next(&LevelView { j, q: q_cur.as_ref() });
        let lvl = match (&quot, &q_cur) {
            (Quotient::Exact(a), Some(q)) => {
                let ln_a = Float::with_val(128, a).ln().to_f64();
                Level { log_ratio: ln_a / q.to_f64(), inv_a: 1.0 / a.to_f64() }
            }
            (Quotient::Exact(a), None) => {
                let ln_a = Float::with_val(128, a).ln().to_f64();
                Level { log_ratio: ln_a * inv_q[j], inv_a: 1.0 / a.to_f64() }
            }
            (Quotient::Asymptotic { log_ratio }, _) => Level { log_ratio: *log_ratio, inv_a: 0.0 },
        };
        let next_q = match (&quot, &q_cur) {
            (Quotient::Exact(a), Some(q)) => Some(Integer::from(a * q) + &q_prev),
            _ => None,
        };
        let x_next = lvl.inv_a / (1.0 + x[j] * lvl.inv_a);
        let inv_q_next = match &next_q {
            Some(q) => 1.0 / q.to_f64(),
            None => x_next * inv_q[j],
        };
        let s_next = match &next_q {
            Some(q) => Float::with_val(128, q).ln().to_f64() * inv_q_next,
            None => 0.0,
        };
        inv_q.push(inv_q_next);
        s.push(if inv_q_next == 0.0 { 0.0 } else { s_next });
        x.push(x_next);
        if let Some(q) = q_cur.take() {
            q_prev = q;
        }
        q_cur = next_q;
        levels.push(lvl);
        quotients.push(quot);
    }

    // Backward pass for the tails: t_j = α_{j+1}/a_{j+1} = α_{j+1} · inv_a.
    let mut alpha = vec![0.0f64; total + 1];
    for j in (0..total).rev() {
        let l = levels[j];
        alpha[j] = l.inv_a / (1.0 + alpha[j + 1] * l.inv_a);
    }

    let mut ledger = BrjunoLedger::default();
    let mut sum = 0.0;
    for j in 0..depth {
        let l = levels[j];
        let term = l.log_ratio + s[j] + (x[j] * l.inv_a).ln_1p() * inv_q[j];
        sum += term;
        ledger.partial_sums.push(sum);
    }

    // μ_1 = q_1 = a_1.
    let alpha0 = alpha[0];
    let mut mu = 1.0 / levels[0].inv_a.max(f64::MIN_POSITIVE);
    let mut log_p = 0.0;
    let mut alt = (1.0 / alpha0).ln();
    ledger.alt_sums.push(alt);
    ledger.beta.push(1.0);
    ledger.beta.push(alpha0);
    for j in 1..=depth {
        let l = levels[j];
        let tail = (alpha[j + 1] * l.inv_a).ln_1p();
        let rho = mu * (l.log_ratio + tail * inv_q[j]);
        log_p -= rho;
        ledger.log_product_seq.push(log_p);
        ledger.product_seq.push(log_p.exp());
        ledger.q_beta.push(alpha0 * mu);
        alt += alpha0 * rho;
        ledger.alt_sums.push(alt);
        mu *= (1.0 / (1.0 + alpha[j + 1] * l.inv_a)) * (1.0 + x[j] * l.inv_a);
        ledger.beta.push(alpha0 * mu * inv_q[j + 1]);
    }
    (ledger, quotients)
}

/// One named member of the divergence-equivalence family.
#[derive(Clone, Debug, Serialize)]
pub struct CuratedCase {
    pub name: &'static str,
    pub rule: QuotientRule,
    /// Whether the underlying number satisfies the Brjuno condition.
    pub brjuno: bool,
}

/// Five Brjuno and five non-Brjuno expansions.
pub fn curated_family() -> Vec<CuratedCase> {
    vec![
        CuratedCase { name: "constant-2", rule: QuotientRule::Periodic { period: vec![2] }, brjuno: true },
        CuratedCase { name: "constant-3", rule: QuotientRule::Periodic { period: vec![3] }, brjuno: true },
        CuratedCase { name: "periodic-2-5", rule: QuotientRule::Periodic { period: vec![2, 5] }, brjuno: true },
        CuratedCase { name: "linear", rule: QuotientRule::Linear { offset: 1 }, brjuno: true },
        CuratedCase { name: "geometric-2", rule: QuotientRule::Geometric { base: 2 }, brjuno: true },
        CuratedCase { name: "exp-q", rule: QuotientRule::SuperExp { c: 1.0 }, brjuno: false },
        CuratedCase { name: "exp-4q", rule: QuotientRule::SuperExp { c: 4.0 }, brjuno: false },
        CuratedCase { name: "exp-10q", rule: QuotientRule::SuperExp { c: 10.0 }, brjuno: false },
        CuratedCase { name: "spiked-10", rule: QuotientRule::Spiked { c: 10.0, filler: 2 }, brjuno: false },
        CuratedCase { name: "spiked-20", rule: QuotientRule::Spiked { c: 20.0, filler: 3 }, brjuno: false },
    ]
}

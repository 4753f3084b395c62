use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cf::{approximants, classical_cf_value, expand_cf, product_sequence, CfError, ModifiedCF};
use crate::prec::{cis_turns, to_c64, CF_BITS};
use crate::report::{Check, Relation, VerifyReport};

/// `C · α_1 · α_2^{α_1} ⋯ α_m^{α_1⋯α_{m−1}}`.
pub fn gate_diameter_bound(cf: &ModifiedCF, m: usize, c: f64) -> Result<f64, CfError> {
    product_sequence(cf, m).map(|p| c * p)
}

/// Minimum of `|P^k(cv)|` over `0 ≤ k ≤ budget` for each budget in `budgets` (ascending),
/// with `P(z) = λz + z²` and `cv = −λ²/4`. Returns `(min, argmin)` per budget and the escape
/// iterate if the orbit left the disk of radius 4.
pub fn critical_orbit_min(lambda: Complex64, budgets: &[u64]) -> (Vec<(f64, u64)>, Option<u64>) {
    let mut z = -lambda * lambda / 4.0;
    let mut best = z.norm();
    let mut arg = 0u64;
    let mut out = Vec::with_capacity(budgets.len());
    let mut k = 0u64;
    let mut escaped = None;
    for &b in budgets {
        while k < b && escaped.is_none() {
            k += 1;
            z = lambda * z + z * z;
            let d = z.norm();
            if d < best {
                best = d;
                arg = k;
            }
            if d > 4.0 {
                escaped = Some(k);
            }
        }
        out.push((best, arg));
    }
    (out, escaped)
}

/// A parameter given by a classical continued fraction `[0; head…, tail, tail, …]`.
#[derive(Clone, Debug, Serialize)]
pub struct GateCase {
    pub name: String,
    pub head: Vec<u64>,
    pub tail: u64,
}

impl GateCase {
    pub fn new(head: &[u64], tail: u64) -> GateCase {
        let name = format!("[0;{},{tail},...]", head.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","));
        GateCase { name, head: head.to_vec(), tail }
    }

    /// The three figure parameters: `[3,1,1,…]`, `[3,50,1,…]`, `[3,50,10⁵,1,…]`.
    pub fn figure_cases() -> Vec<GateCase> {
        vec![GateCase::new(&[3], 1), GateCase::new(&[3, 50], 1), GateCase::new(&[3, 50, 100_000], 1)]
    }
}

#[derive(Clone, Debug)]
pub struct GateOptions {
    /// Ascending iteration budgets; the last one is the headline budget.
    pub budgets: Vec<u64>,
    pub cf_depth: usize,
    /// Index of the case on which the constant of the diameter bound is fitted.
    pub fit_case: usize,
    /// Largest allowed ratio of the recorded minimum to the fitted bound.
    pub ratio_bound: f64,
}

impl Default for GateOptions {
    fn default() -> Self {
        GateOptions { budgets: vec![100_000, 1_000_000, 10_000_000], cf_depth: 40, fit_case: 0, ratio_bound: 10.0 }
    }
}

/// One (case, budget) row.
#[derive(Clone, Debug, Serialize)]
pub struct GateRecord {
    pub case: String,
    pub alpha: f64,
    pub depth: usize,
    pub budget: u64,
    pub min_abs: f64,
    pub argmin_iter: u64,
    pub product: f64,
    pub gate_bound: f64,
    pub escaped_at: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub records: Vec<GateRecord>,
    pub c_fitted: f64,
    pub report: VerifyReport,
}

struct CaseRun {
    alpha: f64,
    depth: usize,
    product: f64,
    mins: Vec<(f64, u64)>,
    escaped: Option<u64>,
}

fn run_case(case: &GateCase, opts: &GateOptions) -> Result<CaseRun, CfError> {
    let alpha = classical_cf_value(&case.head, case.tail, CF_BITS);
    let lambda = to_c64(&cis_turns(&alpha));
    let cf = expand_cf(&alpha, opts.cf_depth)?;
    let q = approximants(&cf).q;
    let budget = opts.budgets.last().copied().unwrap_or(0);
    let depth = (1..q.len()).take_while(|&m| q[m] <= budget).last().unwrap_or(1);
    let product = product_sequence(&cf, depth)?;
    let (mins, escaped) = critical_orbit_min(lambda, &opts.budgets);
    Ok(CaseRun { alpha: alpha.to_f64(), depth, product, mins, escaped })
}

/// Records the closest approach of the critical orbit to 0 for each case and compares it with
/// the diameter bound at the depth whose denominator `q_m` matches the budget.
pub fn critical_gate_experiment(cases: &[GateCase], opts: &GateOptions) -> Result<GateReport, CfError> {
    let runs: Vec<Result<_, _>> = cases.par_iter().map(|c| run_case(c, opts)).collect();
    let runs = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let last = opts.budgets.len().saturating_sub(1);
    let c_fitted = runs
        .get(opts.fit_case)
        .and_then(|r| r.mins.get(last).map(|m| m.0 / r.product))
        .unwrap_or(f64::NAN);
    let mut records = Vec::new();
    for (case, run) in cases.iter().zip(&runs) {
        for (b, &(min_abs, argmin_iter)) in opts.budgets.iter().zip(&run.mins) {
            records.push(GateRecord {
                case: case.name.clone(),
                alpha: run.alpha,
                depth: run.depth,
                budget: *b,
                min_abs,
                argmin_iter,
                product: run.product,
                gate_bound: c_fitted * run.product,
                escaped_at: run.escaped,
            });
        }
    }

    let mut report = VerifyReport::new(
        "gate",
        format!(
            "{} parameters, budgets {:?}, bound constant fitted on {}",
            cases.len(),
            opts.budgets,
            cases.get(opts.fit_case).map(|c| c.name.as_str()).unwrap_or("-")
        ),
        53,
    );
    let headline: Vec<f64> = runs.iter().filter_map(|r| r.mins.get(last).map(|m| m.0)).collect();
    let decreasing = headline.windows(2).all(|w| w[1] < w[0]);
    report.push(Check::flag("minimum distance strictly decreasing across cases", decreasing));
    for (case, run) in cases.iter().zip(&runs) {
        let min = run.mins.get(last).map(|m| m.0).unwrap_or(f64::NAN);
        let ratio = min / (c_fitted * run.product);
        report.push(Check::new(format!("{}: min / gate bound", case.name), ratio, Relation::AtMost, opts.ratio_bound));
        report.push(Check::flag(format!("{}: orbit bounded", case.name), run.escaped.is_none()));
        report.fit(format!("{}: min_abs", case.name), min);
        report.fit(format!("{}: depth", case.name), run.depth as f64);
    }
    report.fit("C", c_fitted);
    report.samples = records.len();
    Ok(GateReport { records, c_fitted, report })
}

use rug::Integer;
use serde::Serialize;

use crate::cf::{approximants, Approximants, ModifiedCF};
use crate::report::{Check, VerifyReport};

/// Both sides of the sector-count bound
/// `(k_n q_n + q_{n−1}) + q_n(a − k − 1) ≤ q_{n+1} + q_n(k_n − k − 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorCount {
    pub lhs: Integer,
    pub rhs: Integer,
    /// `q_{n+1} = a q_n + q_{n−1}`
    pub recurrence_exact: bool,
}

impl SectorCount {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs && ((self.lhs == self.rhs) == self.recurrence_exact)
    }
}

/// Evaluates the sector count exactly. `k_n` and `k` may exceed the other terms, so signed
/// integers are used throughout.
pub fn sector_count(q_prev: &Integer, q_n: &Integer, q_next: &Integer, k_n: i64, k: i64, a_next: &Integer) -> SectorCount {
    let lhs = Integer::from(k_n * q_n) + q_prev + Integer::from(q_n * (Integer::from(a_next - k) - 1));
    let rhs = Integer::from(q_next + Integer::from(q_n * (k_n - k - 1)));
    let rec = Integer::from(a_next * q_n) + q_prev;
    SectorCount { lhs, rhs, recurrence_exact: rec == *q_next }
}

/// Sector-count check at `level` of an approximant table (`1 ≤ level < q.len() − 1`).
pub fn sector_count_check(q: &Approximants, level: usize, k_n: i64, k: i64, a_next: &Integer) -> Option<(SectorCount, Check)> {
    if level == 0 || level + 1 >= q.q.len() {
        return None;
    }
    let sc = sector_count(&q.q[level - 1], &q.q[level], &q.q[level + 1], k_n, k, a_next);
    let check = Check::flag(format!("sector count at level {level}: {} <= {}", sc.lhs, sc.rhs), sc.holds());
    Some((sc, check))
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerLevel {
    pub n: usize,
    pub alpha_n: f64,
    /// `⌊1/α_n⌋`
    pub a_floor: String,
    pub q_n: String,
    pub k_n: i64,
    pub sector_count: String,
    pub omega_bound: String,
}

/// One level-`n` step expressed as level-0 iterates.
#[derive(Clone, Debug, Serialize)]
pub struct Transfer {
    pub level: usize,
    pub kind: String,
    pub level0_iterates: String,
}

/// Per-level sector counts and iterate-count correspondences of a renormalization tower.
#[derive(Clone, Debug, Default, Serialize)]
pub struct TowerLedger {
    pub levels: Vec<TowerLevel>,
    pub transfer_log: Vec<Transfer>,
    pub checks: Vec<Check>,
}

impl TowerLedger {
    /// Builds levels `1..=depth` with a constant placeholder `k_n` and sector offset `k`.
    pub fn from_cf(cf: &ModifiedCF, depth: usize, k_n: i64, k: i64) -> TowerLedger {
        let q = approximants(cf);
        let mut ledger = TowerLedger::default();
        for n in 1..=depth.min(q.q.len().saturating_sub(2)) {
            let Some(al) = cf.alpha_seq.get(n) else { break };
            if al.is_zero() {
                break;
            }
            let inv = rug::Float::with_val(cf.prec, al.recip_ref());
            let a_floor = inv.floor().to_integer().expect("finite");
            let Some((sc, check)) = sector_count_check(&q, n, k_n, k, &a_floor) else { break };
            let omega = Integer::from(&q.q[n + 1] + Integer::from(&q.q[n] * (k_n - k - 1)));
            ledger.levels.push(TowerLevel {
                n,
                alpha_n: al.to_f64(),
                a_floor: a_floor.to_string(),
                q_n: q.q[n].to_string(),
                k_n,
                sector_count: sc.lhs.to_string(),
                omega_bound: omega.to_string(),
            });
            ledger.checks.push(check);
            ledger.transfer_log.push(Transfer { level: n, kind: "step".into(), level0_iterates: q.q[n].to_string() });
            let s_step = Integer::from(k_n * &q.q[n]) + &q.q[n - 1];
            ledger.transfer_log.push(Transfer { level: n, kind: "sector step".into(), level0_iterates: s_step.to_string() });
        }
        ledger
    }

    /// Concatenates two ledgers; levels and transfers keep their order.
    pub fn merge(mut self, other: TowerLedger) -> TowerLedger {
        self.levels.extend(other.levels);
        self.transfer_log.extend(other.transfer_log);
        self.checks.extend(other.checks);
        self
    }

    pub fn report(&self, name: &str) -> VerifyReport {
        let mut r = VerifyReport::new("sector-count", format!("{name}: {} tower levels", self.levels.len()), 0);
        for c in &self.checks {
            r.push(c.clone());
        }
        r.samples = self.checks.len();
        r
    }
}

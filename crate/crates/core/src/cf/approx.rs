use rug::Integer;
use serde::{Deserialize, Serialize};

use super::ModifiedCF;

/// Which recurrence produces the denominators.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `q_{n+1} = a_{n+1} q_n + q_{n-1}`.
    #[default]
    Plain,
    /// `q_{n+1} = a_{n+1} q_n + ε_n q_{n-1}`, the usual nearest-integer convergents.
    SignAware,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approximants {
    pub p: Vec<Integer>,
    pub q: Vec<Integer>,
    pub convention: Convention,
}

impl Approximants {
    /// Numerators and denominators for levels `0..a.len()`, with `q_0 = 1`, `q_1 = a_1`.
    pub fn from_quotients(a: &[Integer], eps: &[i8], convention: Convention) -> Approximants {
        let sign = |n: usize| -> i32 {
            match convention {
                Convention::Plain => 1,
                Convention::SignAware => i32::from(eps.get(n).copied().unwrap_or(1)),
            }
        };
        let mut p = Vec::with_capacity(a.len());
        let mut q = Vec::with_capacity(a.len());
        if a.is_empty() {
            return Approximants { p, q, convention };
        }
        p.push(a[0].clone());
        q.push(Integer::from(1));
        if a.len() > 1 {
            p.push(Integer::from(&a[1] * &a[0]) + sign(0));
            q.push(a[1].clone());
        }
        for n in 1..a.len() - 1 {
            let pn = Integer::from(&a[n + 1] * &p[n]) + Integer::from(&p[n - 1] * sign(n));
            let qn = Integer::from(&a[n + 1] * &q[n]) + Integer::from(&q[n - 1] * sign(n));
            p.push(pn);
            q.push(qn);
        }
        Approximants { p, q, convention }
    }

    /// First level at which the two conventions give different denominators, if any.
    pub fn divergence_level(a: &[Integer], eps: &[i8]) -> Option<usize> {
        let plain = Approximants::from_quotients(a, eps, Convention::Plain);
        let signed = Approximants::from_quotients(a, eps, Convention::SignAware);
        plain.q.iter().zip(&signed.q).position(|(x, y)| x != y)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

pub fn approximants(cf: &ModifiedCF) -> Approximants {
    Approximants::from_quotients(&cf.a, &cf.eps, Convention::Plain)
}

pub fn approximants_with(cf: &ModifiedCF, convention: Convention) -> Approximants {
    Approximants::from_quotients(&cf.a, &cf.eps, convention)
}

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < bound`
    Below,
    /// `value <= bound`
    AtMost,
    /// `value > bound`
    Above,
    /// `value >= bound`
    AtLeast,
    /// Pass flag set by the producer.
    Holds,
}

/// One checked inequality or flag.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Check {
        let pass = match relation {
            Relation::Below => value < bound,
            Relation::AtMost => value <= bound,
            Relation::Above => value > bound,
            Relation::AtLeast => value >= bound,
            Relation::Holds => value != 0.0,
        };
        Check { name: name.into(), value, bound, relation, pass }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: f64::from(u8::from(ok)), bound: 1.0, relation: Relation::Holds, pass: ok }
    }
}

/// Structured record of every checked inequality, residual and fitted constant of one section.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub lemma: String,
    pub region: String,
    pub checks: Vec<Check>,
    pub fitted: BTreeMap<String, f64>,
    pub flags: Vec<String>,
    pub samples: usize,
    pub precision_bits: u32,
    pub pass: bool,
}

impl VerifyReport {
    pub fn new(lemma: impl Into<String>, region: impl Into<String>, precision_bits: u32) -> VerifyReport {
        VerifyReport {
            lemma: lemma.into(),
            region: region.into(),
            checks: Vec::new(),
            fitted: BTreeMap::new(),
            flags: Vec::new(),
            samples: 0,
            precision_bits,
            pass: true,
        }
    }

    pub fn push(&mut self, check: Check) -> &mut Self {
        self.pass &= check.pass;
        self.checks.push(check);
        self
    }

    pub fn fit(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.fitted.insert(name.into(), value);
        self
    }

    pub fn flag(&mut self, flag: impl Into<String>) -> &mut Self {
        let f = flag.into();
        if !self.flags.contains(&f) {
            self.flags.push(f);
        }
        self
    }

    /// Folds another section's checks into this one, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: VerifyReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
        for (k, v) in other.fitted {
            self.fitted.insert(format!("{prefix}{k}"), v);
        }
        for f in other.flags {
            self.flag(f);
        }
        self.samples += other.samples;
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

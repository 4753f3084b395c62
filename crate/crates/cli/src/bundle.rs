use std::path::Path;

use serde::Serialize;

use crate::config::Config;
use crate::suite::Section;

pub const BUNDLE_SCHEMA: &str = "fatoulab/report-bundle/v1";

/// Every report of one run together with the tool version and the configuration hash.
#[derive(Clone, Debug, Serialize)]
pub struct ReportBundle {
    pub schema: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub config: Config,
    pub sections: Vec<Section>,
    pub pass: bool,
    /// Seconds since the epoch taken from `SOURCE_DATE_EPOCH`; null when unset.
    pub started: Option<u64>,
    pub finished: Option<u64>,
}

/// `SOURCE_DATE_EPOCH`, when set to an integer.
pub fn source_date_epoch() -> Option<u64> {
    std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse().ok()
}

impl ReportBundle {
    pub fn new(config: &Config, sections: Vec<Section>) -> ReportBundle {
        let stamp = source_date_epoch();
        ReportBundle {
            schema: BUNDLE_SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            config_hash: config.hash(),
            config: config.clone(),
            pass: sections.iter().all(|s| s.report.pass),
            sections,
            started: stamp,
            finished: stamp,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json())
    }

    /// Names of failed sections and their failed checks, as compact JSON.
    pub fn failure_summary(&self) -> String {
        let failed: Vec<serde_json::Value> = self
            .sections
            .iter()
            .filter(|s| !s.report.pass)
            .map(|s| {
                serde_json::json!({
                    "section": s.name,
                    "failed_checks": s.report.failures().iter().map(|c| serde_json::json!({
                        "name": c.name,
                        "value": c.value,
                        "bound": c.bound,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "pass": self.pass, "failed": failed }).to_string()
    }
}

use serde::Serialize;

use super::config::ForcingSpec;
use crate::params::Params;
use crate::steady::SmallnessReport;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridEcho {
    pub n_modes: usize,
    pub half_period: f64,
    pub dx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForcingEcho {
    pub spec: ForcingSpec,
    pub band_lo: f64,
    pub band_hi: f64,
    pub x_norm: f64,
}

/// Everything needed to reproduce and audit a run. Serialized as TOML with a
/// fixed key order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    pub override_gate: bool,
    pub config_path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub config_echo: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forcing: Option<ForcingEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smallness: Option<SmallnessReport>,
    pub checks: Vec<CheckResult>,
    pub metrics: Vec<Metric>,
    pub timings: Vec<Timing>,
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &str, override_gate: bool) -> Self {
        Self {
            artifact: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            status: "running".to_string(),
            exit_code: -1,
            override_gate,
            config_path: config_path.to_string(),
            error: None,
            config_echo: String::new(),
            grid: None,
            params: None,
            forcing: None,
            smallness: None,
            checks: Vec::new(),
            metrics: Vec::new(),
            timings: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|m| m.name == name).map(|m| m.value)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

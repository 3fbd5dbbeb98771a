//! Column-oriented JSON report shared by all commands.

use isospec_core::grid::GridFunction;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

/// A measured quantity that must stay below `tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
        }
    }

    pub fn pass(&self) -> bool {
        self.value < self.tolerance
    }
}

/// Samples as JSON numbers, masked samples as `null`.
pub fn column(f: &GridFunction) -> Value {
    Value::Array(f.values().iter().map(|&v| finite(v)).collect())
}

pub fn finite(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

pub fn x_column(f: &GridFunction) -> Value {
    json!(f.grid().points())
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub config: Value,
    pub spectra: Map<String, Value>,
    pub potentials: Map<String, Value>,
    pub modes: Map<String, Value>,
    pub checks: Vec<Check>,
    /// Command-specific scalars reported next to the checks.
    pub facts: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(config: &RunConfig, timestamp: Option<u64>) -> Self {
        let mut cfg = serde_json::to_value(config).expect("config serializes");
        if let (Some(t), Some(obj)) = (timestamp, cfg.as_object_mut()) {
            obj.insert("generated_unix_seconds".into(), json!(t));
        }
        Self {
            config: cfg,
            ..Self::default()
        }
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.pass())
            .map(|c| c.name.clone())
            .collect()
    }

    pub fn to_value(&self) -> Value {
        let mut inv = Map::new();
        inv.insert("name".into(), json!(self.checks.iter().map(|c| &c.name).collect::<Vec<_>>()));
        inv.insert(
            "value".into(),
            Value::Array(self.checks.iter().map(|c| finite(c.value)).collect()),
        );
        inv.insert("tolerance".into(), json!(self.checks.iter().map(|c| c.tolerance).collect::<Vec<_>>()));
        inv.insert("pass".into(), json!(self.checks.iter().map(Check::pass).collect::<Vec<_>>()));
        inv.insert("failures".into(), json!(self.failures()));
        inv.extend(self.facts.clone());
        json!({
            "config": self.config,
            "spectra": self.spectra,
            "potentials": self.potentials,
            "modes": self.modes,
            "invariants": inv,
            "warnings": self.warnings,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

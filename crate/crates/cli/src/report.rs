//! The JSON record printed by every run.

use qkzb::{Error, C64};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// Outcome of one command. Serialized with sorted keys.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub value: Option<Value>,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub details: BTreeMap<String, Value>,
    pub error: Option<(String, String)>,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        inputs: BTreeMap<String, String>,
        tolerance: f64,
    ) -> Self {
        Self {
            command: command.into(),
            inputs,
            value: None,
            residual: None,
            tolerance,
            pass: false,
            details: BTreeMap::new(),
            error: None,
            wall_time_ms: 0,
        }
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.pass = false;
        self.error = Some((e.kind().to_string(), e.to_string()));
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), json!(self.inputs));
        if let Some(v) = &self.value {
            m.insert("value".into(), v.clone());
        }
        if let Some(r) = self.residual {
            m.insert("residual".into(), real(r));
        }
        m.insert("tolerance".into(), real(self.tolerance));
        m.insert("pass".into(), json!(self.pass));
        if !self.details.is_empty() {
            m.insert("details".into(), json!(self.details));
        }
        if let Some((kind, message)) = &self.error {
            m.insert("error".into(), json!({ "kind": kind, "message": message }));
        }
        m.insert("wall_time_ms".into(), json!(self.wall_time_ms as u64));
        Value::Object(m)
    }
}

/// A real number; non-finite values become strings so the JSON stays valid.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn complex(z: C64) -> Value {
    json!({ "re": real(z.re), "im": real(z.im) })
}

use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Criterion {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// JSON document printed by every subcommand.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: &'static str,
    pub pass: bool,
    pub params: Value,
    pub criteria: Vec<Criterion>,
    pub warnings: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, params: Value) -> Self {
        Report {
            schema: SCHEMA,
            command,
            pass: true,
            params,
            criteria: Vec::new(),
            warnings: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.criteria.push(Criterion { name: name.to_string(), pass, detail: detail.into() });
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        eprintln!("warning: {msg}");
        self.warnings.push(msg);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}

//! Reports: one JSON document per run plus a plain table for humans.

use serde_json::{json, Map, Value};

pub const EXIT_SCHEMA: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_SIZE: i32 = 3;

/// A failed run: exit code, a stable kind name, and structured details.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: i32,
    pub kind: String,
    pub message: String,
    pub details: Value,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError { code: EXIT_SCHEMA, kind: "Schema".into(), message: message.into(), details: Value::Null }
    }

    pub fn math(kind: &str, message: impl Into<String>, details: Value) -> Self {
        CliError { code: EXIT_MATH, kind: kind.into(), message: message.into(), details }
    }
}

/// Variant name of a core error, e.g. `NotIntegral`.
fn kind_of(e: &stackcoh::Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string()
}

impl From<stackcoh::Error> for CliError {
    fn from(e: stackcoh::Error) -> Self {
        let code = match e {
            stackcoh::Error::SizeGuard { .. } => EXIT_SIZE,
            stackcoh::Error::Parse(_) => EXIT_SCHEMA,
            _ => EXIT_MATH,
        };
        let details = match &e {
            stackcoh::Error::SizeGuard { cells, cap } => json!({"cells": cells, "cap": cap}),
            _ => Value::Null,
        };
        CliError { code, kind: kind_of(&e), message: e.to_string(), details }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub result: Map<String, Value>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Nonzero when the computation answered "no" to a precondition.
    pub code: i32,
    pub error: Option<CliError>,
}

impl Report {
    pub fn new(command: &str, header: &[&str]) -> Self {
        Report {
            command: command.into(),
            result: Map::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            code: 0,
            error: None,
        }
    }

    pub fn set(&mut self, key: &str, v: Value) -> &mut Self {
        self.result.insert(key.into(), v);
        self
    }

    pub fn row(&mut self, cells: Vec<String>) -> &mut Self {
        self.rows.push(cells);
        self
    }

    /// A failure report carrying the obstruction.
    pub fn failure(command: &str, e: CliError) -> Self {
        let mut r = Report::new(command, &["error", "message"]);
        r.rows.push(vec![e.kind.clone(), e.message.clone()]);
        r.code = e.code;
        r.error = Some(e);
        r
    }

    pub fn json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("status".into(), json!(if self.code == 0 { "ok" } else { "error" }));
        m.insert("exit_code".into(), json!(self.code));
        m.insert("result".into(), Value::Object(self.result.clone()));
        if let Some(e) = &self.error {
            m.insert("error".into(), json!({"kind": e.kind, "message": e.message, "details": e.details}));
        }
        Value::Object(m)
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json()).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn table(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate() {
                if i < widths.len() {
                    widths[i] = widths[i].max(c.chars().count());
                } else {
                    widths.push(c.chars().count());
                }
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().enumerate().map(|(i, c)| format!("{c:<w$}", w = widths[i])).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = format!("{}\n", self.command);
        out += &line(&self.header);
        out += &line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>());
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Invariant {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Invariant {
    pub fn new(name: impl Into<String>, pass: bool, detail: Value) -> Self {
        Invariant { name: name.into(), pass, detail }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Value,
    pub invariants: Vec<Invariant>,
    pub error: Option<String>,
    /// Replaces the generic CSV body (the Haar table).
    pub csv_body: Option<String>,
}

impl Report {
    pub fn new(config: &ExperimentConfig, results: Value, invariants: Vec<Invariant>) -> Self {
        Report { config: config.clone(), results, invariants, error: None, csv_body: None }
    }

    pub fn failed(config: &ExperimentConfig, error: String) -> Self {
        Report { config: config.clone(), results: Value::Null, invariants: Vec::new(), error: Some(error), csv_body: None }
    }

    pub fn all_pass(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }

    pub fn status(&self) -> &'static str {
        if self.error.is_some() {
            "error"
        } else if self.all_pass() {
            "ok"
        } else {
            "invariant_violation"
        }
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "tool": "frame-forge",
            "version": env!("CARGO_PKG_VERSION"),
            "config": self.config,
            "status": self.status(),
            "results": self.results,
            "invariants": self.invariants,
        });
        if let Some(e) = &self.error {
            v["error"] = json!(e);
        }
        v
    }

    pub fn render(&self) -> String {
        match self.config.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report is valid JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = format!("# config: {}\n", serde_json::to_string(&self.config).expect("config serializes"));
        out.push_str(&format!("# status: {}\n", self.status()));
        if let Some(e) = &self.error {
            out.push_str(&format!("# error: {}\n", e.replace('\n', " ")));
        }
        match &self.csv_body {
            Some(body) => out.push_str(body),
            None => {
                out.push_str("key,value\n");
                let mut rows = Vec::new();
                flatten("results", &self.results, &mut rows);
                for inv in &self.invariants {
                    rows.push((format!("invariant.{}", inv.name), inv.pass.to_string()));
                }
                for (k, v) in rows {
                    out.push_str(&format!("{k},{v}\n"));
                }
            }
        }
        out
    }
}

/// Scalars of a JSON tree as `(dotted.path, value)`; floats get 17 significant digits.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&format!("{prefix}.{k}"), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        Value::Number(n) => {
            let s = match (n.as_i64(), n.as_u64(), n.as_f64()) {
                (Some(i), _, _) => i.to_string(),
                (_, Some(u), _) => u.to_string(),
                (_, _, Some(f)) => frame_forge::haar::format_sig17(f),
                _ => n.to_string(),
            };
            out.push((prefix.to_string(), s));
        }
        Value::String(s) => out.push((prefix.to_string(), quote(s))),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), String::new())),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

//! Report fragments and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    VerificationFailed,
    Error,
}

/// The outcome of one command: echo, status and named fields.
#[derive(Debug, Clone, Serialize)]
pub struct Fragment {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(flatten)]
    pub fields: BTreeMap<String, Value>,
}

impl Fragment {
    pub fn ok(command: &str, fields: BTreeMap<String, Value>) -> Self {
        let verified = fields.get("verified").and_then(Value::as_bool).unwrap_or(true);
        Fragment {
            command: command.to_string(),
            status: if verified { Status::Ok } else { Status::VerificationFailed },
            error: None,
            fields,
        }
    }

    pub fn error(command: &str, message: String) -> Self {
        Fragment {
            command: command.to_string(),
            status: Status::Error,
            error: Some(message),
            fields: BTreeMap::new(),
        }
    }
}

/// Builds a field map from `key => value` pairs.
#[macro_export]
macro_rules! fields {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = ::std::collections::BTreeMap::<String, ::serde_json::Value>::new();
        $( m.insert($k.to_string(), ::serde_json::json!($v)); )*
        m
    }};
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub commands: usize,
    pub errors: usize,
    pub verification_failures: usize,
    pub exit_code: i32,
}

impl Summary {
    pub fn of(fragments: &[Fragment]) -> Self {
        let errors = fragments.iter().filter(|f| f.status == Status::Error).count();
        let verification_failures = fragments
            .iter()
            .filter(|f| f.status == Status::VerificationFailed)
            .count();
        let exit_code = if verification_failures > 0 {
            1
        } else if errors > 0 {
            2
        } else {
            0
        };
        Summary {
            commands: fragments.len(),
            errors,
            verification_failures,
            exit_code,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionReport {
    pub domain: Value,
    pub results: Vec<Fragment>,
    pub summary: Summary,
}

impl SessionReport {
    pub fn new(domain: Value, results: Vec<Fragment>) -> Self {
        let summary = Summary::of(&results);
        SessionReport {
            domain,
            results,
            summary,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json(self),
            Format::Text => {
                let mut out = String::new();
                writeln!(out, "domain:").unwrap();
                write_value(&mut out, &self.domain, 1);
                for f in &self.results {
                    out.push_str(&fragment_text(f));
                }
                let s = &self.summary;
                writeln!(
                    out,
                    "summary: {} commands, {} errors, {} verification failures, exit {}",
                    s.commands, s.errors, s.verification_failures, s.exit_code
                )
                .unwrap();
                out
            }
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn fragment_text(f: &Fragment) -> String {
    let mut out = String::new();
    writeln!(out, "> {}", f.command).unwrap();
    match f.status {
        Status::Ok => {}
        Status::VerificationFailed => writeln!(out, "  VERIFICATION FAILED").unwrap(),
        Status::Error => writeln!(out, "  error: {}", f.error.as_deref().unwrap_or("")).unwrap(),
    }
    write_value(&mut out, &json!(f.fields), 1);
    out
}

/// Renders a JSON value as an indented key listing.
pub fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if is_scalar(v) {
                    writeln!(out, "{pad}{k}: {}", scalar_text(v)).unwrap();
                } else if v.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    let items: Vec<String> = v.as_array().unwrap().iter().map(scalar_text).collect();
                    writeln!(out, "{pad}{k}: [{}]", items.join(", ")).unwrap();
                } else {
                    writeln!(out, "{pad}{k}:").unwrap();
                    write_value(out, v, depth + 1);
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                if is_scalar(v) {
                    writeln!(out, "{pad}- {}", scalar_text(v)).unwrap();
                } else {
                    writeln!(out, "{pad}-").unwrap();
                    write_value(out, v, depth + 1);
                }
            }
        }
        v => writeln!(out, "{pad}{}", scalar_text(v)).unwrap(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

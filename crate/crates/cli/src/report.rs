//! Rendering of reports as JSON or CSV.

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    /// One flat record.
    Record(Map<String, Value>),
    /// A table of flat records sharing the keys of the first.
    Table(Vec<Map<String, Value>>),
    /// A file in one of the JSON interchange formats.
    File(Value),
}

fn cell(v: &Value) -> String {
    let raw = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

fn csv(rows: &[Map<String, Value>], keys: &[String]) -> String {
    let mut out = keys.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = keys.iter().map(|k| row.get(k).map(cell).unwrap_or_default()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match (self, format) {
            (Report::Record(m), Format::Json) => Ok(pretty(&Value::Object(m.clone()))),
            (Report::Table(rows), Format::Json) => {
                Ok(pretty(&Value::Array(rows.iter().cloned().map(Value::Object).collect())))
            }
            (Report::File(v), Format::Json) => Ok(pretty(v)),
            (Report::Record(m), Format::Csv) => {
                let keys: Vec<String> = m.keys().cloned().collect();
                Ok(csv(std::slice::from_ref(m), &keys))
            }
            (Report::Table(rows), Format::Csv) => {
                let keys: Vec<String> = rows.first().map(|r| r.keys().cloned().collect()).unwrap_or_default();
                Ok(csv(rows, &keys))
            }
            (Report::File(_), Format::Csv) => {
                Err(CliError::BadInput("generated files are JSON only".into()))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

//! CSV and JSON tables plus the short human summary on stderr.
//!
//! Rows are plain serde records. CSV prints floats with 17 significant digits;
//! JSON uses serde_json's shortest round-trip form, which parses back to the
//! same `f64`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        Meta {
            tool: "radcomp".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config,
        }
    }
}

/// Everything a command emits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document<R, S> {
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<R>,
    pub summary: S,
}

/// A row type with a fixed column order.
pub trait Record: Serialize + DeserializeOwned {
    const COLUMNS: &'static [&'static str];
}

impl<R: Record, S: Serialize> Document<R, S> {
    pub fn new(meta: Meta, rows: Vec<R>, summary: S) -> Self {
        Document {
            meta,
            columns: R::COLUMNS.iter().map(|c| c.to_string()).collect(),
            rows,
            summary,
        }
    }

    pub fn render(&self, format: Format) -> serde_json::Result<String> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self)?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => csv(R::COLUMNS, &self.rows),
        }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        let text = self.render(format).map_err(std::io::Error::other)?;
        out.write_all(text.as_bytes())
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format!("{:.16e}", n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        // serde_json maps non-finite floats to null.
        Value::Null => "NaN".to_string(),
        other => other.to_string(),
    }
}

fn csv<R: Serialize>(columns: &[&str], rows: &[R]) -> serde_json::Result<String> {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let value = serde_json::to_value(row)?;
        let fields: Vec<String> = columns
            .iter()
            .map(|c| csv_field(value.get(*c).unwrap_or(&Value::Null)))
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Six significant digits, fixed or scientific like C's `%g`.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

//! Tables in three formats. The JSON form carries a schema tag so that
//! consumers can detect layout changes.

use crate::config::Format;
use serde_json::{json, Map, Value};
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    pub kind: &'static str,
    pub params: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Map<String, Value>,
}

impl Report {
    pub fn new(kind: &'static str, columns: &[&'static str]) -> Self {
        Report { kind, params: Map::new(), columns: columns.to_vec(), rows: Vec::new(), summary: Map::new() }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_string(), v.into());
        self
    }

    pub fn row(&mut self, r: Vec<Value>) {
        debug_assert_eq!(r.len(), self.columns.len());
        self.rows.push(r);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": format!("qlorentz.{}/{}", self.kind, SCHEMA_VERSION),
            "params": self.params,
            "columns": self.columns,
            "rows": self.rows,
            "summary": self.summary,
        })
    }

    pub fn emit(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r.iter().map(cell))?;
                }
                w.flush()
            }
            Format::Pretty => self.pretty(out),
        }
    }

    fn pretty(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(out, "# {}", self.kind)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k}: {}", cell(v))?;
        }
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let mut width: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &cells {
            for (k, c) in r.iter().enumerate() {
                width[k] = width[k].max(c.chars().count());
            }
        }
        let line = |parts: Vec<&str>| {
            let last = parts.len() - 1;
            parts
                .iter()
                .enumerate()
                .map(|(k, p)| if k == last { p.to_string() } else { format!("{p:<w$}", w = width[k]) })
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.columns.to_vec()))?;
        for r in &cells {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "{k}: {}", cell(v))?;
        }
        Ok(())
    }
}

/// Flat text for one value: strings verbatim, arrays joined with "; ".
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(cell).collect::<Vec<_>>().join("; "),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", &["n", "value"]);
        r.param("order", 2);
        r.row(vec![json!(0), json!("1")]);
        r.row(vec![json!(1), json!(["a", "b"])]);
        r.summary("pass", true);
        r
    }

    #[test]
    fn formats() {
        let r = sample();
        let mut buf = Vec::new();
        r.emit(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,value\n0,1\n1,a; b\n");
        let v = r.to_json();
        assert_eq!(v["schema"], "qlorentz.demo/1");
        assert_eq!(v["rows"][1][1][0], "a");
        let mut buf = Vec::new();
        r.emit(Format::Pretty, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# demo\n# order: 2\nn  value\n0  1\n"), "{text}");
        assert!(text.ends_with("pass: true\n"));
    }
}

//! Rendering of command results as JSON, CSV or plain text.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// Shared fields (inputs, provenance) plus one row per computed value.
#[derive(Debug, Default)]
pub struct Report {
    pub header: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
    /// False when a requested check failed; the exit status becomes 1.
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut header = Map::new();
        header.insert("command".into(), command.into());
        Self {
            header,
            rows: Vec::new(),
            ok: true,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.header.insert(key.into(), value.into());
        self
    }

    pub fn row(&mut self, fields: Vec<(&str, Value)>) {
        self.rows.push(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect());
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Plain => self.plain(),
        }
    }

    /// One document. A single row is merged into the top level; several
    /// rows go under `results`.
    fn json(&self) -> String {
        let mut doc = self.header.clone();
        match self.rows.as_slice() {
            [one] => doc.extend(one.clone()),
            rows => {
                doc.insert("results".into(), Value::Array(rows.iter().cloned().map(Value::Object).collect()));
            }
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        text.push('\n');
        text
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for row in &self.rows {
            for k in row.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
        cols
    }

    /// One row per computed value.
    fn csv(&self) -> String {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).expect("in-memory write");
        for row in &self.rows {
            w.write_record(cols.iter().map(|c| row.get(c).map_or(String::new(), cell)))
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    fn plain(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("{k}: {}\n", cell(v)));
        }
        if let [one] = self.rows.as_slice() {
            for (k, v) in one {
                out.push_str(&format!("{k}: {}\n", cell(v)));
            }
            return out;
        }
        let cols = self.columns();
        let table: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|c| r.get(c).map_or(String::new(), cell)).collect())
            .collect();
        let widths: Vec<usize> = cols
            .iter()
            .enumerate()
            .map(|(i, c)| table.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        out.push_str(&line(cols.iter().map(String::as_str).collect()));
        for r in &table {
            out.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        out
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A float as JSON; non-finite values become `null`.
pub fn num(v: f64) -> Value {
    Value::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(rows: usize) -> Report {
        let mut r = Report::new("demo");
        r.set("beta", "(1,2)");
        for i in 0..rows {
            r.row(vec![("method", format!("m{i}").into()), ("value", num(0.5 + i as f64))]);
        }
        r
    }

    #[test]
    fn single_row_is_flattened() {
        let v: Value = serde_json::from_str(&sample(1).render(Format::Json)).unwrap();
        assert_eq!(v["value"], 0.5);
        assert_eq!(v["command"], "demo");
        assert!(v.get("results").is_none());
    }

    #[test]
    fn several_rows_are_listed() {
        let r = sample(2);
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["results"][1]["value"], 1.5);
        assert_eq!(r.render(Format::Csv), "method,value\nm0,0.5\nm1,1.5\n");
        assert!(r.render(Format::Plain).contains("m1      1.5"));
    }

    #[test]
    fn non_finite_values_are_null() {
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(cell(&num(f64::INFINITY)), "");
    }
}

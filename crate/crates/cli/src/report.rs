use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// A command's result: a JSON body plus a flat table for TSV output.
pub struct Report {
    pub command: &'static str,
    pub fields: Vec<String>,
    pub body: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            fields: Vec::new(),
            body: Map::new(),
            columns,
            rows: Vec::new(),
            ok: true,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.body.insert(key.to_string(), value);
    }

    pub fn field(&mut self, descriptor: String) {
        if !self.fields.contains(&descriptor) {
            self.fields.push(descriptor);
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut out = Map::new();
                out.insert("tool".into(), json!("e1forge"));
                out.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
                out.insert("command".into(), json!(self.command));
                out.insert("fields".into(), json!(self.fields));
                out.insert("ok".into(), json!(self.ok));
                out.extend(self.body.clone());
                let mut s =
                    serde_json::to_string_pretty(&Value::Object(out)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Tsv => {
                let mut s = format!(
                    "# e1forge {} {} fields={}\n",
                    env!("CARGO_PKG_VERSION"),
                    self.command,
                    self.fields.join(",")
                );
                s.push_str(&self.columns.join("\t"));
                s.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> =
                        r.iter().map(|c| c.replace(['\t', '\n'], " ")).collect();
                    s.push_str(&cells.join("\t"));
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn emit(&self, format: Format, output: Option<&Path>) -> io::Result<()> {
        let text = self.render(format);
        match output {
            Some(path) => fs::write(path, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

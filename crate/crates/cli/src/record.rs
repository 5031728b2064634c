use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// The result of one command: what was asked, what came out, and which
/// formula produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    /// Rows for `--csv`, as a header and records. Not part of the JSON.
    #[serde(skip)]
    pub grid: Option<Grid>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Grid {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl ResultRecord {
    pub fn new(command: &str, provenance: &str) -> Self {
        ResultRecord {
            command: command.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            provenance: provenance.to_string(),
            timestamp: None,
            grid: None,
        }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), value.into());
        self
    }

    pub fn output(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.outputs.insert(key.to_string(), value.into());
        self
    }

    pub fn with_grid(mut self, grid: Grid) -> Self {
        self.grid = Some(grid);
        self
    }

    pub fn stamped(mut self) -> Self {
        self.timestamp = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
        self
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => serde_json::to_string_pretty(self)
                .map(|s| s + "\n")
                .map_err(|e| CliError::Output(e.to_string())),
            Format::Csv => self.render_csv(),
            Format::Table => Ok(self.render_table()),
        }
    }

    fn render_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Output(e.to_string());
        match &self.grid {
            Some(grid) => {
                w.write_record(&grid.header).map_err(err)?;
                for row in &grid.rows {
                    w.write_record(row).map_err(err)?;
                }
            }
            None => {
                w.write_record(["key", "value"]).map_err(err)?;
                for (k, v) in &self.outputs {
                    w.write_record([k.as_str(), &scalar_text(v)]).map_err(err)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let width = self
            .inputs
            .keys()
            .chain(self.outputs.keys())
            .map(|k| k.len())
            .max()
            .unwrap_or(0);
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "  {k:<width$}  {}", scalar_text(v));
        }
        let _ = writeln!(out, "  {}", "-".repeat(width + 2));
        for (k, v) in self.outputs.iter().filter(|(_, v)| !is_listing(v)) {
            let _ = writeln!(out, "  {k:<width$}  {}", scalar_text(v));
        }
        if let Some(grid) = &self.grid {
            if grid.rows.len() <= 64 {
                out.push('\n');
                out.push_str(&text_table(grid));
            } else {
                let _ = writeln!(out, "  ({} rows; use --csv or --json to list them)", grid.rows.len());
            }
        }
        let _ = writeln!(out, "  [{}]", self.provenance);
        out
    }
}

/// Arrays of objects are shown through the grid rather than inline.
fn is_listing(v: &Value) -> bool {
    matches!(v, Value::Array(items) if items.iter().any(Value::is_object))
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_table(grid: &Grid) -> String {
    let mut widths: Vec<usize> = grid.header.iter().map(|h| h.len()).collect();
    for row in &grid.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        format!("  {}\n", padded.join("  ").trim_end())
    };
    let mut out = line(&grid.header);
    for row in &grid.rows {
        out.push_str(&line(row));
    }
    out
}

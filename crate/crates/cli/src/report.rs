//! Machine-readable run reports.

use serde::Serialize;
use serde_json::Value;

/// Everything a command emits: the command name, an echo of its effective
/// inputs (seeds included), the results, and the tool version. Keys are
/// serialized in sorted order, so identical runs print identical bytes.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports are tree-shaped");
        text.push('\n');
        text
    }
}

/// CSV with a header row, LF line endings, and `.` decimals. Floats print in
/// the shortest round-trip form.
pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

use std::fmt::Write as _;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: String,
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable / malformed input documents.
    Usage(String),
    /// Input parsed but violates a domain invariant or hypothesis.
    Domain(String),
    /// A requested size exceeds a configured limit.
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Cap(m) => m,
        }
    }
}

pub fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// Input documents read so far, hashed in the order they were read.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    pub fn load<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn digest(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// Plain-text rendering: scalars as `key: value`, arrays of flat objects as
/// aligned tables.
pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} (schema {})", report.command, report.schema_version);
    let _ = writeln!(out, "inputs sha256 {}", report.inputs_digest);
    render_value(&mut out, "", &report.results, 0);
    for w in &report.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flat_row(v: &Value) -> Option<Vec<(String, String)>> {
    let obj = v.as_object()?;
    obj.iter()
        .map(|(k, v)| scalar(v).map(|s| (k.clone(), s)))
        .collect()
}

fn render_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(s) = scalar(v) {
        let _ = writeln!(out, "{pad}{key}: {s}");
        return;
    }
    match v {
        Value::Object(map) => {
            if !key.is_empty() {
                let _ = writeln!(out, "{pad}{key}:");
            }
            let depth = if key.is_empty() { depth } else { depth + 1 };
            for (k, v) in map {
                render_value(out, k, v, depth);
            }
        }
        Value::Array(items) => {
            let rows: Option<Vec<_>> = items.iter().map(flat_row).collect();
            match rows {
                Some(rows) if !rows.is_empty() => {
                    let _ = writeln!(out, "{pad}{key}:");
                    let mut header: Vec<&str> = Vec::new();
                    for (k, _) in rows.iter().flatten() {
                        if !header.contains(&k.as_str()) {
                            header.push(k);
                        }
                    }
                    let cell = |r: &[(String, String)], h: &str| {
                        r.iter()
                            .find(|(k, _)| k == h)
                            .map_or("", |(_, v)| v.as_str())
                            .to_string()
                    };
                    let cells: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| header.iter().map(|h| cell(r, h)).collect())
                        .collect();
                    let widths: Vec<usize> = (0..header.len())
                        .map(|c| {
                            cells
                                .iter()
                                .map(|r| r[c].len())
                                .chain([header[c].len()])
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |cells: &[&str]| {
                        let padded: Vec<String> = cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}"))
                            .collect();
                        format!("{pad}  {}", padded.join("  "))
                    };
                    let _ = writeln!(out, "{}", line(&header));
                    for r in &cells {
                        let r: Vec<&str> = r.iter().map(String::as_str).collect();
                        let _ = writeln!(out, "{}", line(&r));
                    }
                }
                _ if items.iter().all(|i| scalar(i).is_some()) => {
                    let cells: Vec<String> = items.iter().filter_map(scalar).collect();
                    let _ = writeln!(out, "{pad}{key}: [{}]", cells.join(", "));
                }
                _ => {
                    let _ = writeln!(out, "{pad}{key}:");
                    for (i, item) in items.iter().enumerate() {
                        render_value(out, &format!("[{i}]"), item, depth + 1);
                    }
                }
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tables_are_aligned() {
        let report = RunReport {
            schema_version: SCHEMA_VERSION.into(),
            command: "orbits".into(),
            inputs_digest: "00".into(),
            results: json!({"table": [{"m": 1, "tr": "3"}, {"m": 10, "tr": "15127"}]}),
            warnings: vec!["w".into()],
        };
        let text = render_text(&report);
        assert!(text.contains("   m     tr"));
        assert!(text.contains("  10  15127"));
        assert!(text.ends_with("warning: w\n"));
    }

    #[test]
    fn ragged_rows_share_a_header() {
        let report = RunReport {
            schema_version: SCHEMA_VERSION.into(),
            command: "x".into(),
            inputs_digest: "00".into(),
            results: json!({"rows": [{"a": 1}, {"a": 2, "b": "y"}]}),
            warnings: vec![],
        };
        let text = render_text(&report);
        assert!(text.contains("  a  b\n"));
        assert!(text.contains("  1   \n"));
        assert!(text.contains("  2  y\n"));
    }

    #[test]
    fn digest_depends_on_content_and_order() {
        let dir = std::env::temp_dir().join(format!("obook-digest-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (a, b) = (dir.join("a.json"), dir.join("b.json"));
        std::fs::write(&a, "1").unwrap();
        std::fs::write(&b, "2").unwrap();
        let digest = |paths: &[&Path]| {
            let mut inputs = Inputs::default();
            for p in paths {
                let _: Value = inputs.load(p).unwrap();
            }
            inputs.digest()
        };
        assert_eq!(digest(&[&a, &b]), digest(&[&a, &b]));
        assert_ne!(digest(&[&a, &b]), digest(&[&b, &a]));
        std::fs::remove_dir_all(dir).unwrap();
    }
}

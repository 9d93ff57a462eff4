use std::io::Write;
use std::path::{Path, PathBuf};

use catstat_core::{Error, Result, TOOL_VERSION};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// A rendered command result plus the data needed for the config echo.
pub struct Output {
    pub command: &'static str,
    pub config: Value,
    pub json: Value,
    pub csv: Option<String>,
    pub text: String,
}

impl Output {
    pub fn render(&self, format: Format) -> Result<String> {
        let config = serde_json::to_string(&self.config).expect("config serializes");
        match format {
            Format::Json => {
                let doc = serde_json::json!({
                    "tool_version": TOOL_VERSION,
                    "command": self.command,
                    "config": self.config,
                    "result": self.json,
                });
                Ok(serde_json::to_string_pretty(&doc).expect("output serializes") + "\n")
            }
            Format::Csv => {
                let body = self
                    .csv
                    .as_ref()
                    .ok_or_else(|| Error::Usage(format!("{} has no CSV form; use json or text", self.command)))?;
                Ok(format!("# {TOOL_VERSION}\n# config: {config}\n{body}"))
            }
            Format::Text => Ok(format!("# {TOOL_VERSION}\n# config: {config}\n{}\n", self.text.trim_end())),
        }
    }
}

/// Resolves `--out` against `CATSTAT_OUT_DIR` when the path is relative.
pub fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os("CATSTAT_OUT_DIR") {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Usage(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

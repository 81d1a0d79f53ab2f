//! Atomic file output and metadata sidecars.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub struct Writer {
    dir: PathBuf,
    /// Paths written so far, for the summary printed at exit.
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes `contents` to a temporary file in the target directory, then
    /// renames it into place.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let io = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(io)?;
        self.written.push(path);
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
        text.push('\n');
        self.write(name, &text)
    }

    /// Writes `<name>.meta.json` next to a data file.
    pub fn write_meta(&mut self, data_file: &str, meta: &Value) -> Result<(), CliError> {
        self.write_json(&format!("{data_file}.meta.json"), meta)
    }
}

/// Sidecar contents shared by every command.
pub fn metadata(command: &str, config: &RunConfig, decisions: Value, results: Value) -> Value {
    json!({
        "tool": "ferrotorque",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "decisions": decisions,
        "results": results,
    })
}

//! Staged output files, written only after a command has fully succeeded.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Files of one run, kept in memory until [`Outputs::commit`].
pub struct Outputs {
    command: &'static str,
    config: Value,
    files: Vec<(String, Vec<u8>)>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    file: &'a str,
    command: &'a str,
    version: &'a str,
    config: &'a Value,
}

impl Outputs {
    pub fn new(command: &'static str, config: Value) -> Self {
        Outputs { command, config, files: Vec::new() }
    }

    /// Adds a data file plus a `<name>.meta.json` sidecar holding the
    /// resolved config.
    pub fn data(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        let sidecar = Sidecar { file: name, command: self.command, version: env!("CARGO_PKG_VERSION"), config: &self.config };
        let meta = json_bytes(&sidecar)?;
        self.files.push((name.to_string(), bytes));
        self.files.push((format!("{name}.meta.json"), meta));
        Ok(())
    }

    /// Adds a JSON document with the resolved config embedded under `config`.
    pub fn json<T: Serialize>(&mut self, name: &str, body: &T) -> Result<(), CliError> {
        let mut value = serde_json::to_value(body).map_err(|e| CliError::Output(e.to_string()))?;
        if let Value::Object(map) = &mut value {
            map.insert("command".into(), Value::from(self.command));
            map.insert("version".into(), Value::from(env!("CARGO_PKG_VERSION")));
            map.insert("config".into(), self.config.clone());
        }
        self.files.push((name.to_string(), json_bytes(&value)?));
        Ok(())
    }

    /// Writes every file through a temporary file in `dir` and renames it
    /// into place.
    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, bytes) in self.files {
            let target = dir.join(&name);
            let fail = |e: std::io::Error| CliError::Output(format!("{}: {e}", target.display()));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
            tmp.write_all(&bytes).map_err(fail)?;
            tmp.flush().map_err(fail)?;
            tmp.persist(&target).map_err(|e| fail(e.error))?;
            written.push(target);
        }
        Ok(written)
    }
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Output(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

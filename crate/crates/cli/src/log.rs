//! Plain-text run log with ISO-8601 timestamps.

use anyhow::{Context, Result};
use chrono::{SecondsFormat, Utc};
use std::fs::File;
use std::io::Write;
use std::path::Path;

pub struct Logger {
    prefix: String,
    file: Option<File>,
}

impl Logger {
    /// Log to stderr only.
    pub fn stderr() -> Self {
        Logger { prefix: String::new(), file: None }
    }

    /// Log to stderr and to `path`, each stderr line tagged with `prefix`.
    pub fn to_file(path: &Path, prefix: impl Into<String>) -> Result<Self> {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(Logger { prefix: prefix.into(), file: Some(file) })
    }

    pub fn line(&mut self, msg: impl AsRef<str>) {
        let stamp = Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true);
        let msg = msg.as_ref();
        eprintln!("{stamp} {}{msg}", self.prefix);
        if let Some(f) = &mut self.file {
            // a failing log write should not abort training
            let _ = writeln!(f, "{stamp} {msg}");
        }
    }
}

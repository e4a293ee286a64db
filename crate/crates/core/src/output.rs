//! Shared CSV header line.

use std::io::Write;

use crate::error::Result;

/// `git describe` of the source tree at build time, or the package version.
pub const VERSION: &str = match option_env!("SPIKEFILTER_GIT_DESCRIBE") {
    Some(v) => v,
    None => concat!("v", env!("CARGO_PKG_VERSION")),
};

/// A single `#`-prefixed comment line carrying the version, the full run
/// configuration and any extra `key=value` metadata.
#[derive(Debug, Clone, Default)]
pub struct CsvHeader {
    pub config_json: String,
    pub extra: Vec<(String, String)>,
}

impl CsvHeader {
    pub fn new(config_json: impl Into<String>) -> Self {
        Self {
            config_json: config_json.into(),
            extra: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.extra.push((key.to_string(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        let mut s = format!("# spikefilter {VERSION} config={}", self.config_json);
        for (k, v) in &self.extra {
            s.push(' ');
            s.push_str(k);
            s.push('=');
            s.push_str(v);
        }
        s
    }

    pub fn write<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", self.line())?;
        Ok(())
    }
}

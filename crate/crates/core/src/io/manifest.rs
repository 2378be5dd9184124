use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const MANIFEST_SCHEMA: &str = "rr-ldp-manifest/1";

/// Everything needed to re-run a command: the argument vector, the resolved
/// parameters, the master seed and the producing version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// RFC 3339 time of the original run. Kept unchanged on replay.
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(
        command: impl Into<String>,
        argv: Vec<String>,
        parameters: serde_json::Value,
        seed: Option<u64>,
        timestamp: impl Into<String>,
    ) -> Self {
        Self {
            schema: MANIFEST_SCHEMA.into(),
            command: command.into(),
            argv,
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp: timestamp.into(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

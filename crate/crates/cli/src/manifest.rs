use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::formats::write_json;

/// What produced a set of output files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// FNV-1a digest of the canonical configuration string.
    pub config_digest: String,
    pub config: String,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub seed: Option<u64>,
    pub tool_version: &'static str,
}

impl RunManifest {
    pub fn new(command: &str, config: String) -> Self {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in config.bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        RunManifest {
            command: command.to_string(),
            config_digest: format!("{h:016x}"),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION"),
        }
    }

    /// Written next to `primary` as `<primary>.manifest.json`.
    pub fn write_beside(&self, primary: &Path) -> Result<PathBuf> {
        let mut name = primary.as_os_str().to_owned();
        name.push(".manifest.json");
        let path = PathBuf::from(name);
        write_json(&path, self)?;
        Ok(path)
    }
}

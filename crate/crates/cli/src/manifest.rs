use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use mfdfa_core::pipeline::PipelineConfig;

use crate::args::Command;
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to repeat a run: the command, the resolved
/// configuration and a digest of every input file that was read.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub config: PipelineConfig,
    /// Input path to hex SHA-256.
    pub inputs: BTreeMap<String, String>,
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(mfdfa_core::Error::from)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Collects digests of the files a command reads.
#[derive(Debug, Default)]
pub struct InputLog {
    pub inputs: BTreeMap<String, String>,
}

impl InputLog {
    pub fn record(&mut self, path: &Path) -> Result<(), CliError> {
        let digest = sha256_file(path)?;
        self.inputs.insert(path.display().to_string(), digest);
        Ok(())
    }
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(mfdfa_core::Error::from)?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: not a manifest: {e}", path.display())))
    }

    /// Fails if any recorded input is missing or has changed.
    pub fn verify_inputs(&self) -> Result<(), CliError> {
        for (path, digest) in &self.inputs {
            let now = sha256_file(Path::new(path))?;
            if &now != digest {
                return Err(CliError::InputChanged(path.clone()));
            }
        }
        Ok(())
    }
}

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to replay a run and check that it reproduced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, as given.
    pub argv: Vec<String>,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub timestamp: String,
    pub workers: usize,
    pub inputs: Vec<FileDigest>,
    /// Result files, relative to the output directory.
    pub outputs: Vec<FileDigest>,
    pub stdout_sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn digest_file(path: &Path) -> Result<FileDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

pub fn read_manifest(path: &Path) -> Result<RunManifest> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))
}

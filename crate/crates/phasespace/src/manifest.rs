//! Run manifests: parameters, tool version and output checksums.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct OutputFile {
    /// Path relative to the manifest's directory.
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub parameters: serde_json::Value,
    /// Headline numbers printed by the command (IPR, sums, PSNR, ...).
    pub results: serde_json::Value,
    pub outputs: Vec<OutputFile>,
}

pub fn sha256_file(path: &Path) -> Result<(u64, String)> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok((bytes.len() as u64, hex::encode(Sha256::digest(&bytes))))
}

/// Writes `manifest.json` into `dir`, checksumming each output.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    parameters: &impl Serialize,
    results: &impl Serialize,
    outputs: &[PathBuf],
) -> Result<PathBuf> {
    let mut files = Vec::with_capacity(outputs.len());
    for path in outputs {
        let (bytes, sha256) = sha256_file(path)?;
        let rel = path.strip_prefix(dir).unwrap_or(path);
        files.push(OutputFile { path: rel.display().to_string(), bytes, sha256 });
    }
    files.sort_by(|a, b| a.path.cmp(&b.path));
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: command.to_string(),
        parameters: serde_json::to_value(parameters)?,
        results: serde_json::to_value(results)?,
        outputs: files,
    };
    let path = dir.join(MANIFEST_NAME);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    crate::imageio::write_text(&path, &text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("abc.txt");
        fs::write(&p, b"abc").unwrap();
        let (n, h) = sha256_file(&p).unwrap();
        assert_eq!(n, 3);
        assert_eq!(h, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        let m = write_manifest(dir.path(), "test", &serde_json::json!({"K": 0.5}), &(), &[p]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(m).unwrap()).unwrap();
        assert_eq!(v["outputs"][0]["path"], "abc.txt");
        assert_eq!(v["parameters"]["K"], 0.5);
    }
}

//! Run manifests: every invocation writes `manifest.json` next to its
//! artifacts, echoing the effective configuration, digests of every
//! input it read, and digests of every file it wrote. Manifests carry
//! no timestamps, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use culina_core::{Error, Result};
use serde_json::json;
use sha2::{Digest, Sha256};

/// Manifest schema identifier.
pub const MANIFEST_FORMAT: &str = "culina-manifest/1";

/// Hex-encoded SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Collects inputs and artifacts for one run and writes the manifest.
#[derive(Debug)]
pub struct RunManifest {
    subcommand: &'static str,
    out_dir: PathBuf,
    config: BTreeMap<String, String>,
    /// role -> (path as given, digest)
    inputs: BTreeMap<String, (String, String)>,
    /// artifact name (relative to out_dir) -> digest
    artifacts: BTreeMap<String, String>,
}

impl RunManifest {
    /// Creates the output directory and an empty manifest for it.
    pub fn create(
        subcommand: &'static str,
        out_dir: &Path,
        config: BTreeMap<String, String>,
    ) -> Result<RunManifest> {
        std::fs::create_dir_all(out_dir).map_err(|source| Error::Io {
            path: out_dir.to_path_buf(),
            source,
        })?;
        Ok(RunManifest {
            subcommand,
            out_dir: out_dir.to_path_buf(),
            config,
            inputs: BTreeMap::new(),
            artifacts: BTreeMap::new(),
        })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Digests one input file under a role name ("corpus", "aliases", ...).
    pub fn record_input(&mut self, role: &str, path: &Path) -> Result<()> {
        let digest = sha256_hex(&read_file(path)?);
        self.inputs
            .insert(role.to_string(), (path.display().to_string(), digest));
        Ok(())
    }

    /// Writes one artifact into the output directory (creating any
    /// subdirectories in `name`) and records its digest.
    pub fn write_artifact(&mut self, name: &str, content: &str) -> Result<PathBuf> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
        std::fs::write(&path, content.as_bytes()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        self.artifacts
            .insert(name.to_string(), sha256_hex(content.as_bytes()));
        Ok(path)
    }

    /// Names of the artifacts written so far, sorted.
    pub fn artifact_names(&self) -> Vec<String> {
        self.artifacts.keys().cloned().collect()
    }

    /// Serializes the manifest and writes `manifest.json`.
    pub fn write(self) -> Result<PathBuf> {
        let config_json =
            serde_json::to_string(&self.config).map_err(|e| Error::Data(e.to_string()))?;
        let inputs: BTreeMap<&String, serde_json::Value> = self
            .inputs
            .iter()
            .map(|(role, (path, sha))| (role, json!({ "path": path, "sha256": sha })))
            .collect();
        let artifacts: BTreeMap<&String, serde_json::Value> = self
            .artifacts
            .iter()
            .map(|(name, sha)| (name, json!({ "sha256": sha })))
            .collect();
        let manifest = json!({
            "format": MANIFEST_FORMAT,
            "subcommand": self.subcommand,
            "versions": {
                "culina-core": culina_core::VERSION,
                "culina-cli": env!("CARGO_PKG_VERSION"),
            },
            "config": self.config,
            "config_sha256": sha256_hex(config_json.as_bytes()),
            "inputs": inputs,
            "artifacts": artifacts,
        });
        let text = format!("{}\n", serde_json::to_string_pretty(&manifest).map_err(|e| Error::Data(e.to_string()))?);
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, text.as_bytes()).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

//! The generation manifest: everything a later `run` needs to reproduce or
//! audit an experiment, including per-file content hashes.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetEntry {
    pub file: String,
    pub rep: u32,
    pub n: usize,
    pub seed: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub source: String,
    pub graph_file: String,
    pub scm_file: String,
    pub mag_file: String,
    pub treatment: String,
    pub outcome: String,
    pub latents: Vec<String>,
    pub latent_shortfall: bool,
    pub true_effect: f64,
    pub base_seed: u64,
    pub sizes: Vec<usize>,
    pub reps: u32,
    pub datasets: Vec<DatasetEntry>,
}

impl Manifest {
    pub fn save(&self, dir: &Path) -> Result<()> {
        let path = dir.join("manifest.json");
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Manifest> {
        let path = dir.join("manifest.json");
        let json = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        Ok(serde_json::from_str(&json)?)
    }

    /// Confirms each dataset file exists and still hashes to its manifest
    /// entry.
    pub fn verify_hashes(&self, dir: &Path) -> Result<()> {
        for d in &self.datasets {
            let path = dir.join(&d.file);
            let got = sha256_file(&path)?;
            anyhow::ensure!(
                got == d.sha256,
                "{} hash mismatch: manifest {}, file {}",
                d.file,
                d.sha256,
                got
            );
        }
        Ok(())
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

//! Batch execution and the output manifest.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{Kind, Loaded};
use crate::experiments::{self, Artifacts};
use crate::output::{sha256_hex, to_canonical_string};

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub kind: Kind,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub files: Vec<FileEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub config_sha256: String,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn failures(&self) -> usize {
        self.entries.iter().filter(|e| e.status == Status::Error).count()
    }
}

/// Runs every experiment on a pool of `workers` threads and writes reports,
/// CSV tables and `manifest.json` into `out`. Results are merged in
/// configuration order, so the output does not depend on `workers`.
pub fn run(loaded: &Loaded, config_bytes: &[u8], out: &Path, workers: usize, seed: u64) -> std::io::Result<Manifest> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().map_err(std::io::Error::other)?;
    let results: Vec<Result<Artifacts, String>> = pool.install(|| {
        (0..loaded.config.experiments.len()).into_par_iter().map(|i| experiments::run(loaded, i, seed)).collect()
    });
    std::fs::create_dir_all(out)?;
    let mut entries = Vec::new();
    for (exp, result) in loaded.config.experiments.iter().zip(results) {
        let entry = match result {
            Ok(artifacts) => {
                let mut files =
                    vec![write(out, &format!("{}.json", exp.name), to_canonical_string(artifacts.report).as_bytes())?];
                if let Some(csv) = artifacts.csv {
                    files.push(write(out, &format!("{}.csv", exp.name), csv.as_bytes())?);
                }
                ManifestEntry { name: exp.name.clone(), kind: exp.kind, status: Status::Ok, error: None, files }
            }
            Err(e) => ManifestEntry {
                name: exp.name.clone(),
                kind: exp.kind,
                status: Status::Error,
                error: Some(e),
                files: vec![],
            },
        };
        entries.push(entry);
    }
    let manifest = Manifest { seed, config_sha256: sha256_hex(config_bytes), entries };
    let text = to_canonical_string(json!(manifest));
    std::fs::write(out.join(MANIFEST), text)?;
    Ok(manifest)
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> std::io::Result<FileEntry> {
    std::fs::write(dir.join(name), bytes)?;
    Ok(FileEntry { path: name.to_string(), sha256: sha256_hex(bytes) })
}

/// Checks every hash listed in the manifest in `dir`.
pub fn verify(dir: &Path) -> std::io::Result<Vec<String>> {
    let manifest: Manifest =
        serde_json::from_slice(&std::fs::read(dir.join(MANIFEST))?).map_err(std::io::Error::other)?;
    let mut bad = Vec::new();
    for f in manifest.entries.iter().flat_map(|e| &e.files) {
        let bytes = std::fs::read(dir.join(&f.path))?;
        if sha256_hex(&bytes) != f.sha256 {
            bad.push(f.path.clone());
        }
    }
    Ok(bad)
}

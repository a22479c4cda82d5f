use std::path::Path;

use crate::error::Result;

/// Writes through a temporary sibling file and renames it into place.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;

pub(crate) const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub(crate) enum UnitStatus {
    Pending,
    Partial,
    Done,
}

/// Progress of one work unit: the subtree below seed + orbit
/// representative + second point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub(crate) struct UnitRecord {
    pub seed: String,
    pub orbit_rep: usize,
    pub second: usize,
    pub status: UnitStatus,
    pub nodes: u64,
    pub leaves: u64,
    pub max_depth: usize,
    pub quantum: Vec<Vec<usize>>,
    /// Path below the unit root to the first node not yet visited.
    pub resume: Option<Vec<usize>>,
}

impl UnitRecord {
    pub fn pending(seed: &str, orbit_rep: usize, second: usize) -> UnitRecord {
        UnitRecord {
            seed: seed.to_string(),
            orbit_rep,
            second,
            status: UnitStatus::Pending,
            nodes: 0,
            leaves: 0,
            max_depth: 0,
            quantum: Vec::new(),
            resume: None,
        }
    }

    pub fn key(&self) -> (&str, usize, usize) {
        (&self.seed, self.orbit_rep, self.second)
    }
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    version: u32,
    geometry_digest: String,
    config_digest: String,
    units: Vec<UnitRecord>,
    checksum: String,
}

fn checksum(geometry: &str, config: &str, units: &[UnitRecord]) -> String {
    let mut h = Sha256::new();
    h.update(geometry.as_bytes());
    h.update(config.as_bytes());
    h.update(serde_json::to_vec(units).expect("plain data"));
    hex::encode(h.finalize())
}

pub(crate) fn save(path: &Path, geometry: &str, config: &str, units: &[UnitRecord]) -> Result<()> {
    let file = CheckpointFile {
        version: CHECKPOINT_VERSION,
        geometry_digest: geometry.to_string(),
        config_digest: config.to_string(),
        units: units.to_vec(),
        checksum: checksum(geometry, config, units),
    };
    write_atomic(path, &serde_json::to_vec_pretty(&file)?)
}

/// Loads unit records, refusing files written for other tables or another
/// configuration, and files whose checksum does not match.
pub(crate) fn load(path: &Path, geometry: &str, config: &str) -> Result<Vec<UnitRecord>> {
    let bad = |why: &str| Error::Checkpoint(format!("{}: {why}; start a fresh run", path.display()));
    let bytes = std::fs::read(path)?;
    let file: CheckpointFile = serde_json::from_slice(&bytes).map_err(|e| bad(&e.to_string()))?;
    if file.version != CHECKPOINT_VERSION {
        return Err(bad("unsupported version"));
    }
    if file.geometry_digest != geometry {
        return Err(bad("geometry digest differs"));
    }
    if file.config_digest != config {
        return Err(bad("config digest differs"));
    }
    if file.checksum != checksum(&file.geometry_digest, &file.config_digest, &file.units) {
        return Err(bad("checksum mismatch"));
    }
    Ok(file.units)
}

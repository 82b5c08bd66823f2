//! Reproducibility manifest: the resolved config echo, artifact version,
//! fitted constants, wall time, and content hashes of every output file.
//! Re-running from the embedded config echo reproduces the hashes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use burgers_core::FittedConstant;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ManifestConstant {
    pub name: String,
    pub value: f64,
    pub samples: usize,
    pub seed: u64,
}

impl From<&FittedConstant> for ManifestConstant {
    fn from(c: &FittedConstant) -> Self {
        Self {
            name: c.name.clone(),
            value: c.value,
            samples: c.samples,
            seed: c.seed,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub version: String,
    pub wall_time_seconds: f64,
    /// Whether any bound was violated (drives exit code 2).
    pub bound_violation: bool,
    /// The fully resolved configuration, parseable as a config document.
    pub config_echo: String,
    #[serde(default)]
    pub constants: Vec<ManifestConstant>,
    /// Output file name -> sha256 hex digest.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(data: &str) -> String {
    hex::encode(Sha256::digest(data.as_bytes()))
}

impl RunManifest {
    pub fn new(subcommand: &str, config_echo: String) -> Self {
        Self {
            subcommand: subcommand.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            wall_time_seconds: 0.0,
            bound_violation: false,
            config_echo,
            constants: Vec::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn record_output(&mut self, name: &str, contents: &str) {
        self.outputs.insert(name.into(), sha256_hex(contents));
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("manifest always serializable")
    }

    pub fn write(&self, out_dir: &Path) -> io::Result<()> {
        fs::create_dir_all(out_dir)?;
        fs::write(out_dir.join("manifest.toml"), self.to_toml())
    }

    pub fn load(path: &Path) -> io::Result<Self> {
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips_through_toml() {
        let mut m = RunManifest::new("solve", "[domain]\n".into());
        m.record_output("trajectory.csv", "time\n0.0\n");
        m.constants.push(ManifestConstant {
            name: "agmon_h2".into(),
            value: 0.45,
            samples: 500,
            seed: 1,
        });
        let text = m.to_toml();
        let back: RunManifest = toml::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn hashes_are_content_addressed() {
        assert_eq!(sha256_hex("abc").len(), 64);
        assert_ne!(sha256_hex("abc"), sha256_hex("abd"));
        assert_eq!(sha256_hex("abc"), sha256_hex("abc"));
    }
}

//! Run manifests: every command records its echoed config, the artifacts it
//! wrote (with content checksums), wall time, and solver statistics.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Serialize, Default)]
pub struct SolverStats {
    pub steps: usize,
    pub window_shifts: usize,
    pub max_clip: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_rho_min: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub snapshot_times: Vec<f64>,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Echo of the parsed config as TOML; feeding it back reproduces the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_echo: Option<String>,
    pub artifacts: Vec<Artifact>,
    pub wall_time_seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverStats>,
}

/// Collects artifacts as they are written; finalized into `manifest.json`.
pub struct ManifestBuilder {
    out_dir: PathBuf,
    command: String,
    config_echo: Option<String>,
    files: Vec<PathBuf>,
    solver: Option<SolverStats>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(out_dir: &Path, command: &str, config_echo: Option<String>) -> Self {
        Self {
            out_dir: out_dir.to_path_buf(),
            command: command.to_string(),
            config_echo,
            files: Vec::new(),
            solver: None,
            started: Instant::now(),
        }
    }

    /// Write `content` to `name` under the output dir and record it.
    pub fn write_file(&mut self, name: &str, content: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out_dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::validation(format!("cannot create {}: {e}", parent.display())))?;
        }
        std::fs::write(&path, content)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(path.clone());
        Ok(path)
    }

    /// Record a file written by someone else (e.g. the plot writer).
    pub fn record(&mut self, path: PathBuf) {
        self.files.push(path);
    }

    pub fn set_solver_stats(&mut self, stats: SolverStats) {
        self.solver = Some(stats);
    }

    pub fn finish(mut self) -> Result<RunManifest, CliError> {
        self.files.sort();
        let mut artifacts = Vec::with_capacity(self.files.len());
        for p in &self.files {
            let data = std::fs::read(p)
                .map_err(|e| CliError::validation(format!("cannot hash {}: {e}", p.display())))?;
            let rel = p
                .strip_prefix(&self.out_dir)
                .unwrap_or(p)
                .to_string_lossy()
                .into_owned();
            artifacts.push(Artifact {
                path: rel,
                sha256: hex(&Sha256::digest(&data)),
                bytes: data.len() as u64,
            });
        }
        let manifest = RunManifest {
            command: self.command,
            config_echo: self.config_echo,
            artifacts,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            solver: self.solver,
        };
        let json = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::validation(format!("manifest serialization: {e}")))?;
        let path = self.out_dir.join("manifest.json");
        std::fs::write(&path, json)
            .map_err(|e| CliError::validation(format!("cannot write {}: {e}", path.display())))?;
        Ok(manifest)
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

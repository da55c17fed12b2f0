use std::path::{Path, PathBuf};
use std::time::Instant;

use ldpc_lattice::bundle::write_text;
use ldpc_lattice::kv::KvConfig;
use ldpc_lattice::Result;

/// Record of one command run. `config.*` holds the fully resolved
/// configuration, so passing the manifest back as `--config` replays it.
pub struct RunManifest {
    command: String,
    config: KvConfig,
    outputs: Vec<(String, PathBuf)>,
    started: Instant,
}

impl RunManifest {
    pub fn new(command: &str, config: &KvConfig) -> Self {
        RunManifest {
            command: command.to_string(),
            config: config.clone(),
            outputs: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn output(&mut self, name: &str, path: &Path) {
        self.outputs.push((name.to_string(), path.to_path_buf()));
    }

    pub fn to_kv(&self) -> KvConfig {
        let mut kv = KvConfig::new();
        kv.set("command", &self.command);
        kv.set("version", env!("CARGO_PKG_VERSION"));
        for (k, v) in self.config.iter() {
            kv.set(&format!("config.{k}"), v);
        }
        for (name, path) in &self.outputs {
            kv.set(&format!("output.{name}"), path.display());
        }
        kv.set("wall_time_s", format!("{:.3}", self.started.elapsed().as_secs_f64()));
        kv
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join(format!("{}.manifest.kv", self.command));
        write_text(&path, &self.to_kv().to_string())?;
        Ok(path)
    }
}

/// A config file, or the `config.*` section of a manifest.
pub fn resolve_config(raw: KvConfig) -> KvConfig {
    if !raw.contains("command") {
        return raw;
    }
    let mut out = KvConfig::new();
    for (k, v) in raw.section("config") {
        out.set(k, v);
    }
    out
}

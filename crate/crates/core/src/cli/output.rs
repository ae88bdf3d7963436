use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::RunConfig;
use crate::error::Result;
use crate::inequalities::tolerances;
use crate::regularity::EMPIRICAL_STAMP;

/// Environment variable naming the root for relative output directories.
pub const OUTPUT_ROOT_ENV: &str = "SGM_OUTPUT_ROOT";

/// Resolves `output.dir` against `SGM_OUTPUT_ROOT` when it is relative.
pub fn output_dir(cfg: &RunConfig) -> PathBuf {
    let dir = Path::new(&cfg.output_dir);
    if dir.is_absolute() {
        return dir.to_path_buf();
    }
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) if !root.is_empty() => Path::new(&root).join(dir),
        _ => dir.to_path_buf(),
    }
}

/// Every tolerance and threshold in force for this run.
pub fn constants(cfg: &RunConfig) -> Vec<(String, f64)> {
    let mut out: Vec<(String, f64)> = tolerances::ledger()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    out.extend(
        cfg.regularity_config()
            .ledger()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v)),
    );
    out
}

/// Writes output files, each tagged with the config hash and the constants.
pub struct Writer {
    dir: PathBuf,
    hash: String,
    constants: Vec<(String, f64)>,
    pub written: Vec<PathBuf>,
}

impl Writer {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let dir = output_dir(cfg);
        fs::create_dir_all(&dir)?;
        Ok(Self {
            dir,
            hash: cfg.hash(),
            constants: constants(cfg),
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// `# `-prefixed header lines.
    pub fn header_lines(&self) -> Vec<String> {
        let mut h = vec![format!("config_hash={}", self.hash), format!("stamp={EMPIRICAL_STAMP}")];
        h.extend(self.constants.iter().map(|(k, v)| format!("constant {k}={v:?}")));
        h
    }

    fn put(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, body)?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Delimited table with a commented header block.
    pub fn table(&mut self, name: &str, csv: &str) -> Result<PathBuf> {
        let mut body: String = self.header_lines().iter().map(|l| format!("# {l}\n")).collect();
        body.push_str(csv);
        self.put(name, &body)
    }

    /// Two-column whitespace-separated data ready for plotting.
    pub fn series(&mut self, name: &str, columns: (&str, &str), rows: &[(f64, f64)]) -> Result<PathBuf> {
        let mut body: String = self.header_lines().iter().map(|l| format!("# {l}\n")).collect();
        body.push_str(&format!("# {} {}\n", columns.0, columns.1));
        for (a, b) in rows {
            body.push_str(&format!("{a:e} {b:e}\n"));
        }
        self.put(name, &body)
    }

    /// Line-delimited JSON; the first record carries the hash and constants.
    pub fn records(&mut self, name: &str, records: &[Value]) -> Result<PathBuf> {
        let constants: Map<String, Value> = self.constants.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let mut body = json!({
            "kind": "header",
            "config_hash": self.hash,
            "stamp": EMPIRICAL_STAMP,
            "constants": constants,
        })
        .to_string();
        body.push('\n');
        for r in records {
            body.push_str(&r.to_string());
            body.push('\n');
        }
        self.put(name, &body)
    }

    pub fn raw(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        self.put(name, body)
    }
}

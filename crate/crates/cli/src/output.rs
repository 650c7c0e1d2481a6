//! Writing CSV/JSON results and the run manifest that accompanies them.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to re-run a command and check its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub version: &'static str,
    pub jobs: usize,
    pub tolerance: String,
    pub seeds: Vec<u64>,
    pub wall_time_s: f64,
    pub outputs: Vec<OutputDigest>,
    /// Command-specific settings and calibrated quantities.
    pub extra: serde_json::Value,
}

/// Collects outputs of one command invocation.
pub struct Run {
    started: Instant,
    pub jobs: usize,
    pub tolerance: String,
    pub seeds: Vec<u64>,
    pub extra: serde_json::Value,
    outputs: Vec<OutputDigest>,
    first_output: Option<PathBuf>,
}

impl Run {
    pub fn new(jobs: usize, tolerance: String) -> Self {
        Self {
            started: Instant::now(),
            jobs,
            tolerance,
            seeds: Vec::new(),
            extra: serde_json::Value::Null,
            outputs: Vec::new(),
            first_output: None,
        }
    }

    /// Writes `content` to `path`, or to stdout when no path is given.
    pub fn emit(&mut self, path: Option<&Path>, content: &[u8]) -> io::Result<()> {
        match path {
            Some(path) => {
                fs::write(path, content)?;
                self.outputs.push(OutputDigest {
                    path: path.display().to_string(),
                    sha256: format!("{:x}", Sha256::digest(content)),
                });
                self.first_output.get_or_insert_with(|| path.to_path_buf());
                Ok(())
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(content)?;
                out.flush()
            }
        }
    }

    /// Writes `<first output>.manifest.json` if anything went to a file.
    pub fn finish(self) -> io::Result<()> {
        let Some(first) = self.first_output.clone() else {
            return Ok(());
        };
        let manifest = RunManifest {
            command_line: std::env::args().collect(),
            version: env!("CARGO_PKG_VERSION"),
            jobs: self.jobs,
            tolerance: self.tolerance,
            seeds: self.seeds,
            wall_time_s: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
            extra: self.extra,
        };
        let mut path = first.into_os_string();
        path.push(".manifest.json");
        let json = serde_json::to_string_pretty(&manifest).map_err(io::Error::other)?;
        fs::write(PathBuf::from(path), json + "\n")
    }
}

pub fn csv_bytes<H, R>(header: &[H], rows: R) -> Vec<u8>
where
    H: AsRef<str>,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header.iter().map(AsRef::as_ref))
        .expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s.into_bytes()
}

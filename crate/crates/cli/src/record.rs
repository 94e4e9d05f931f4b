//! JSON-lines run records.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;

use anyhow::{Context, Result};
use gapedit::{Counters, GapVerdict};
use serde::{Deserialize, Serialize};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA: u32 = 1;

/// One trial, with every input needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    /// `gap`, `wave` or `exact`.
    pub algorithm: String,
    pub mode: String,
    /// Instance prefix the strings were read from, if any.
    pub input: Option<String>,
    pub n: usize,
    pub k: usize,
    pub l: Option<usize>,
    /// Seed handed to the algorithm for this trial.
    pub seed: u64,
    pub trial: usize,
    pub verdict: Option<GapVerdict>,
    /// Edit distance recorded in the instance manifest.
    pub exact_ed: Option<usize>,
    pub wall_time_s: f64,
    /// Work after `B` is available.
    pub counters: Counters,
    /// Work spent building an index (zero when the index was loaded).
    pub preprocessing: Counters,
    pub index: Option<PathBuf>,
}

/// Serializes records from any thread onto one output stream.
pub struct RecordSink {
    out: Mutex<Box<dyn Write + Send>>,
}

impl RecordSink {
    /// Appends to `path`, or writes to stdout when `path` is `None`.
    pub fn open(path: Option<&PathBuf>) -> Result<Self> {
        let out: Box<dyn Write + Send> = match path {
            Some(p) => Box::new(
                std::fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(p)
                    .with_context(|| format!("opening {}", p.display()))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        Ok(RecordSink { out: Mutex::new(out) })
    }

    pub fn emit(&self, rec: &RunRecord) -> Result<()> {
        let line = serde_json::to_string(rec)? + "\n";
        let mut out = self.out.lock().unwrap();
        out.write_all(line.as_bytes())?;
        out.flush()?;
        Ok(())
    }
}

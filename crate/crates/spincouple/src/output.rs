//! Artifact writing: JSON documents, CSV tables, plain text, and the
//! per-run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{usage, CliError, CliResult};

/// Which table formats a run emits. Text artifacts and the manifest are
/// written regardless.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

pub(crate) fn check_tolerance(t: f64) -> CliResult<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(usage!("--tolerance must be positive and finite, got {t}"))
    }
}

/// A numeric cross-check and its outcome. Non-enforced checks are reported
/// but never fail a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
    pub enforced: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Check {
        Check {
            name: name.to_string(),
            value,
            limit,
            passed: value <= limit,
            enforced: true,
        }
    }

    pub fn informational(name: &str, value: f64, limit: f64) -> Check {
        Check {
            enforced: false,
            ..Check::at_most(name, value, limit)
        }
    }
}

/// Collects artifacts under one directory.
#[derive(Debug)]
pub struct Output {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path, format: Format) -> CliResult<Output> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Output {
            dir: dir.to_path_buf(),
            format,
            written: Vec::new(),
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File names written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    pub fn text(&mut self, name: &str, contents: &str) -> CliResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io { path, source })?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Pretty JSON with a trailing newline, written unconditionally.
    pub fn json_always<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        let mut s =
            serde_json::to_string_pretty(value).map_err(|e| CliError::Serialize(e.to_string()))?;
        s.push('\n');
        self.text(name, &s)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        if self.format.json() {
            self.json_always(name, value)?;
        }
        Ok(())
    }

    /// A CSV table of string cells.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
        if !self.format.csv() {
            return Ok(());
        }
        let path = self.dir.join(name);
        let err = |e: csv::Error| CliError::Serialize(format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for r in rows {
            if r.len() != header.len() {
                return Err(usage!(
                    "internal: row of {} cells for {} columns in {name}",
                    r.len(),
                    header.len()
                ));
            }
            w.write_record(r).map_err(err)?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        self.written.push(name.to_string());
        Ok(())
    }
}

/// The sidecar every run writes: the effective configuration, the
/// artifacts, and the cross-checks.
#[derive(Debug, Serialize)]
pub struct Manifest<C: Serialize> {
    pub command: &'static str,
    pub config: C,
    pub artifacts: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub const MANIFEST: &str = "manifest.json";

/// What a command run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub artifacts: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunSummary {
    /// All enforced checks passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || !c.enforced)
    }

    /// `0` or `1`.
    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Writes the manifest and closes the run.
pub fn finish<C: Serialize>(
    mut out: Output,
    command: &'static str,
    config: C,
    checks: Vec<Check>,
) -> CliResult<RunSummary> {
    let mut artifacts = out.written.clone();
    artifacts.push(MANIFEST.to_string());
    let passed = checks.iter().all(|c| c.passed || !c.enforced);
    let manifest = Manifest {
        command,
        config,
        artifacts: artifacts.clone(),
        checks: checks.clone(),
        passed,
    };
    out.json_always(MANIFEST, &manifest)?;
    Ok(RunSummary { artifacts, checks })
}

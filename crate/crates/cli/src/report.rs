use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use ghmtq::Point2;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Informational,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: Option<f64>,
    pub note: String,
}

impl Check {
    pub fn info(name: &str, measured: Option<f64>, note: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Informational, measured, tolerance: None, note: note.into() }
    }

    /// Pass when `measured <= tolerance`.
    pub fn bound(name: &str, measured: f64, tolerance: f64, note: impl Into<String>) -> Self {
        let status = if measured <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, measured: Some(measured), tolerance: Some(tolerance), note: note.into() }
    }

    pub fn error(name: &str, note: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Error, measured: None, tolerance: None, note: note.into() }
    }

    pub fn informational(mut self) -> Self {
        self.status = Status::Informational;
        self
    }
}

/// Largest value of a pointwise quantity, with where it occurs and how
/// many points could not be evaluated.
#[derive(Debug, Default)]
pub struct Worst {
    pub value: f64,
    pub at: Option<Point2>,
    pub evaluated: usize,
    pub errors: usize,
    pub first_error: Option<String>,
}

impl Worst {
    pub fn push<E: std::fmt::Display>(&mut self, p: Point2, v: std::result::Result<f64, E>) {
        match v {
            Ok(v) => {
                self.evaluated += 1;
                // a NaN sticks: it marks the check as failed
                if !self.value.is_nan() && (self.at.is_none() || v.is_nan() || v > self.value) {
                    self.value = v;
                    self.at = Some(p);
                }
            }
            Err(e) => {
                self.errors += 1;
                if self.first_error.is_none() {
                    self.first_error = Some(e.to_string());
                }
            }
        }
    }

    pub fn value(&mut self, p: Point2, v: f64) {
        self.push(p, Ok::<_, &str>(v));
    }

    /// A bound check over the evaluated points; an error when none could be
    /// evaluated.
    pub fn check(&self, name: &str, tolerance: f64, note: &str) -> Check {
        if self.evaluated == 0 {
            return Check::error(name, self.first_error.clone().unwrap_or_else(|| "no points evaluated".into()));
        }
        let mut n = String::from(note);
        let mut add = |s: String| {
            if !n.is_empty() {
                n.push_str("; ");
            }
            n.push_str(&s);
        };
        if let Some(p) = self.at {
            add(format!("worst at ({}, {}) over {} points", p.x1, p.x2, self.evaluated));
        }
        if self.errors > 0 {
            add(format!("{} points skipped, first: {}", self.errors, self.first_error.as_deref().unwrap_or("")));
        }
        let mut c = Check::bound(name, self.value, tolerance, n);
        if self.value.is_nan() {
            c.status = Status::Fail;
        }
        c
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    /// Files written next to the report.
    pub outputs: Vec<String>,
    pub details: serde_json::Value,
}

impl Report {
    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        let bad = self.checks.iter().any(|c| matches!(c.status, Status::Fail | Status::Error));
        u8::from(bad)
    }

    pub fn write(&self, dir: &Path, wall_seconds: f64) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        let mut json = serde_json::to_string_pretty(self)?;
        json.push('\n');
        fs::write(dir.join("report.json"), json)?;
        let timing = serde_json::json!({ "command": self.command, "wall_seconds": wall_seconds });
        fs::write(dir.join("timing.json"), format!("{}\n", serde_json::to_string_pretty(&timing)?))?;
        Ok(())
    }

    /// One line per check; a closed stdout is ignored.
    pub fn print_summary(&self) {
        let mut out = std::io::stdout().lock();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
                Status::Informational => "info",
            };
            let measured = c.measured.map_or(String::new(), |m| format!(" {m:.3e}"));
            let tol = c.tolerance.map_or(String::new(), |t| format!(" (tol {t:e})"));
            let note = if c.note.is_empty() { String::new() } else { format!(": {}", c.note) };
            let _ = writeln!(out, "{status:5} {}{measured}{tol}{note}", c.name);
        }
    }
}

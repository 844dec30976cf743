// Copyright 2026 The ctqsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Versioned CSV/JSON artifacts.

use std::path::Path;

use serde_json::{json, Value};

use crate::error::Result;

use super::config::SCHEMA_VERSION;

/// One output table: CSV body plus a JSON mirror of the same data.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    /// Extra `#` lines written after the standard header.
    pub notes: Vec<String>,
    pub csv: String,
    pub json: Value,
}

#[derive(Debug, Clone)]
pub struct Meta<'a> {
    pub command: &'a str,
    pub preset: &'a str,
    pub hash: &'a str,
}

impl Artifact {
    pub fn new(name: &str, csv: String, json: Value) -> Self {
        Self { name: name.into(), notes: vec![], csv, json }
    }

    pub fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }

    pub fn render_csv(&self, meta: &Meta) -> String {
        let mut out = format!(
            "# ctqsim schema_version={SCHEMA_VERSION}\n# command={}\n# preset={}\n# config_sha256={}\n",
            meta.command, meta.preset, meta.hash
        );
        for n in &self.notes {
            out.push_str(&format!("# {n}\n"));
        }
        out.push_str(&self.csv);
        out
    }

    pub fn render_json(&self, meta: &Meta) -> String {
        let v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": meta.command,
            "preset": meta.preset,
            "config_sha256": meta.hash,
            "notes": self.notes,
            "data": self.json,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serialisable");
        s.push('\n');
        s
    }
}

/// Write via a temporary file and rename, so readers never see partial output.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("partial");
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

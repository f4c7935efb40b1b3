//! Job parameters and the connection file format.
//!
//! A connection file is `{"n": 2, "rank": 2, "A": [["x1*dy1", "0"], ["0", "0"]]}`:
//! `A` is an `r x r` array of 1-forms in the form language.

use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use symflat::connection::Connection;
use symflat::forms::MatrixForm;

use crate::dsl::parse_form_of_degree;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub n: usize,
    pub rank: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
}

impl ConnectionFile {
    pub fn to_connection(&self) -> anyhow::Result<Connection> {
        if self.n == 0 || self.rank == 0 {
            bail!("n and rank must be at least 1");
        }
        if self.a.len() != self.rank || self.a.iter().any(|row| row.len() != self.rank) {
            bail!("A must be a {r} x {r} array", r = self.rank);
        }
        let mut entries = Vec::with_capacity(self.rank * self.rank);
        for (i, row) in self.a.iter().enumerate() {
            for (j, src) in row.iter().enumerate() {
                let f = parse_form_of_degree(src, self.n, 1).with_context(|| format!("A[{i}][{j}] = {src:?}"))?;
                entries.push(f);
            }
        }
        Ok(Connection::new(MatrixForm::new(self.rank, entries)?)?)
    }
}

pub fn parse_connection(json: &str) -> anyhow::Result<Connection> {
    let file: ConnectionFile = serde_json::from_str(json).context("connection file")?;
    file.to_connection()
}

pub fn load_connection(path: &Path) -> anyhow::Result<Connection> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_connection(&text).with_context(|| format!("in {}", path.display()))
}

/// Parameters of one run, echoed in every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub n: usize,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_deg: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margins: Option<Vec<u32>>,
}

impl JobConfig {
    pub fn new(n: usize, rank: usize) -> anyhow::Result<Self> {
        if n == 0 || rank == 0 {
            bail!("n and rank must be at least 1");
        }
        Ok(JobConfig {
            n,
            rank,
            seed: None,
            trials: None,
            max_deg: None,
            truncation: None,
            margins: None,
        })
    }

    pub fn for_connection(c: &Connection) -> Self {
        JobConfig::new(c.n(), c.rank()).expect("connections have n, rank >= 1")
    }
}
